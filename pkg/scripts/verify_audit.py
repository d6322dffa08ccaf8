import json
import argparse


def verify_audit(file_path):
    with open(file_path, 'r') as file:
        data = json.load(file)

    regressed = [c["id"] for c in data["claims"] if c["verdict"] != c["expected"]]
    if regressed:
        raise ValueError(f"Audit verdicts changed for claims {', '.join(regressed)}")


def verify_residuals(file_path):
    with open(file_path, 'r') as file:
        data = json.load(file)

    failed = [f"{r['family']} / {r['equation']}" for r in data if not r["passed"]]
    if failed:
        raise ValueError(f"Residual sweeps failed for {', '.join(failed)}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Verify audit and residual sweep outputs")
    parser.add_argument("file_path", type=str, help="Path to the json file")
    parser.add_argument("--type", type=str, help="Type of file to verify", default="audit")
    args = parser.parse_args()
    if args.type == "audit":
        verify_audit(args.file_path)
    elif args.type == "verify":
        verify_residuals(args.file_path)

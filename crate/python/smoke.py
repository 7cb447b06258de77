"""Smoke test for the Python bindings.

Build first with `cargo build -p bialg-py`; the script loads the shared
library from target/ unless a `bialg` module is already importable.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import bialg  # noqa: F401

        return bialg
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for name in ("libbialg.so", "libbialg.dylib", "bialg.dll"):
            path = ROOT / "target" / profile / name
            if path.exists():
                loader = importlib.machinery.ExtensionFileLoader("bialg", str(path))
                spec = importlib.util.spec_from_file_location("bialg", path, loader=loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                return module
    sys.exit("bialg extension not found; run `cargo build -p bialg-py`")


def main():
    bialg = load()
    print("bialg", bialg.__version__, "schema", bialg.SCHEMA_VERSION)

    code, text = bialg.run("quantize", builtin="su2", order=3)
    assert code == 0, text
    assert "  D2(J+) = (1/8) z^2 J+ (x) J3^2 + (1/8) z^2 J3^2 (x) J+" in text, text
    assert "sinh((1) z J3)/((1) z)" in text

    code, text = bialg.run("double", builtin="gl:3", report_format="json")
    report = json.loads(text)
    assert code == 0 and report["status"] == "pass"
    assert report["schema_version"] == bialg.SCHEMA_VERSION

    doc = (ROOT / "crates/core/tests/data/su2_bad_lowering.json").read_text()
    checks = dict(bialg.check_document(doc))
    assert checks == {"jacobi": True, "cocycle": False, "compatibility": False}, checks

    assert bialg.normalize_scalar("1/2 + 1/2") == "1"
    for bad in (lambda: bialg.run("quantize", builtin="so3"), lambda: bialg.normalize_scalar("1/0")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    print("smoke: ok")


if __name__ == "__main__":
    main()

import json
import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def schemas():
    folder = pathlib.Path(os.environ.get("MORSECONE_SCHEMAS", ROOT / "schemas"))
    return {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in folder.glob("*.schema.json")}


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("MORSECONE_CLI") or shutil.which("morsecone")
    if not path:
        pytest.skip("morsecone executable not found (set MORSECONE_CLI)")
    return path

import importlib.util
import os
import pathlib
import sys

import pytest

HERE = pathlib.Path(__file__).resolve().parent
PROBLEMS = pathlib.Path(os.environ.get("MODALNF_PROBLEMS", HERE.parents[1] / "problems"))

# Inside a CMake build tree the extension is not next to the package sources.
_build = os.environ.get("MODALNF_TEST_PYTHONPATH")
if _build and "modalnf" not in sys.modules:
    pkg = HERE.parent / "modalnf"
    spec = importlib.util.spec_from_file_location(
        "modalnf", pkg / "__init__.py", submodule_search_locations=[str(pkg), _build]
    )
    module = importlib.util.module_from_spec(spec)
    sys.modules["modalnf"] = module
    spec.loader.exec_module(module)


@pytest.fixture(scope="session")
def burgers_path():
    return str(PROBLEMS / "burgers_r1.cfg")

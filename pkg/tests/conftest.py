from pathlib import Path

import pytest

from qbot.core import Circuit, RegisterMap
from qbot.synth import build_controller

REPO_ROOT = Path(__file__).resolve().parent.parent
MAPS_DIR = REPO_ROOT / "maps"
GOLDENS_DIR = Path(__file__).resolve().parent / "goldens"


@pytest.fixture(scope="session")
def layout() -> RegisterMap:
    return RegisterMap.robot_13q()


@pytest.fixture(scope="session")
def controller() -> Circuit:
    return build_controller(lowered=True)


@pytest.fixture(scope="session")
def logical_controller() -> Circuit:
    return build_controller(lowered=False)

"""
Fixtures compartilhadas pela suíte de testes
"""
import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

os.environ["LOG_LEVEL"] = "error"
os.environ["IODNET_COLOR"] = "never"

from config.settings import CORPUS_DIR  # noqa: E402
from src.hcpn_core.flattener import flatten  # noqa: E402
from src.logger import logger  # noqa: E402
from src.model_parser.parser import parse_file  # noqa: E402
from src.transformer.transformer import transform  # noqa: E402

logger.reconfigure()


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def atm_path() -> Path:
    return CORPUS_DIR / "atm.iom"


@pytest.fixture(scope="session")
def minimal_path() -> Path:
    return CORPUS_DIR / "minimal.iom"


@pytest.fixture(scope="session")
def sensor_path() -> Path:
    return CORPUS_DIR / "sensor_td.iom"


@pytest.fixture(scope="session")
def deadlock_path() -> Path:
    return CORPUS_DIR / "deadlock.iom"


@pytest.fixture(scope="session")
def found_path() -> Path:
    return CORPUS_DIR / "found_message.iom"


@pytest.fixture(scope="session")
def atm_model(atm_path):
    return parse_file(atm_path).unwrap()


@pytest.fixture(scope="session")
def atm_transformed(atm_model):
    return transform(atm_model)


@pytest.fixture(scope="session")
def atm_hcpn(atm_transformed):
    return atm_transformed[0]


@pytest.fixture(scope="session")
def atm_trace(atm_transformed):
    return atm_transformed[1]


@pytest.fixture(scope="session")
def atm_flat(atm_hcpn):
    return flatten(atm_hcpn)


@pytest.fixture(scope="session")
def sensor_flat(sensor_path):
    hcpn, _ = transform(parse_file(sensor_path).unwrap())
    return flatten(hcpn)

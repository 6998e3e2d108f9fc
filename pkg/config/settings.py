"""
Configurações do IodNet
"""
import os
from pathlib import Path

# Diretórios do projeto
PROJECT_ROOT = Path(__file__).parent.parent
SRC_DIR = PROJECT_ROOT / "src"
CONFIG_DIR = PROJECT_ROOT / "config"
CORPUS_DIR = PROJECT_ROOT / "corpus"
SCHEMAS_DIR = PROJECT_ROOT / "schemas"
TEMPLATES_DIR = SRC_DIR / "exporters" / "templates"
OUTPUT_DIR = PROJECT_ROOT / "output"
LOG_DIR = PROJECT_ROOT / "logs"

# Extensões reconhecidas na linha de comando
SOURCE_EXTENSION = ".iom"
HCPN_EXTENSION = ".hcpn.json"

# Configurações da análise (espaço de estados)
ANALYSIS_CONFIG = {
    "default_bound": 1_000_000,
    "default_workers": 1,
    "default_k": 1,
    "time_modes": ("untimed", "discrete"),
}

# Configurações da simulação
SIMULATION_CONFIG = {
    "default_seed": 0,
    "default_steps": 100,
}

# Configurações de exportação
EXPORT_CONFIG = {
    "formats": ("text", "json", "dot"),
    "dot_node_limit": 500,
    "json_indent": 2,
}

# Versões dos esquemas JSON publicados em schemas/
SCHEMA_VERSIONS = {
    "hcpn": "1.0",
    "flat": "1.0",
    "trace": "1.0",
    "report": "1.0",
    "validation": "1.0",
    "graph": "1.0",
}


def env_int(name: str, default: int) -> int:
    """Lê um inteiro do ambiente, caindo no padrão quando ausente ou inválido"""
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        return default

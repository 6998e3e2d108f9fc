"""
Escrita e leitura de documentos JSON (UTF-8, chaves ordenadas)
"""
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from config.settings import EXPORT_CONFIG, SCHEMA_VERSIONS
from src.logger import debug


def to_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=EXPORT_CONFIG["json_indent"], ensure_ascii=False) + "\n"


def write_json(document: Dict[str, Any], path: Union[str, Path]) -> Path:
    """
    Grava um documento JSON

    Args:
        document: Documento com `schema_version` e `kind`
        path: Caminho de destino

    Returns:
        Caminho gravado
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(document), encoding="utf-8")
    debug(f"Documento {document.get('kind')} gravado em {path}")
    return path


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def validation_document(report) -> Dict[str, Any]:
    document = report.to_dict()
    document.update({"schema_version": SCHEMA_VERSIONS["validation"], "kind": "validation"})
    return document


def simulation_document(log, steps: Optional[int] = None) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSIONS["report"],
        "kind": "simulation",
        "seed": log.seed,
        "steps": steps,
        "status": log.status,
        "lines": log.lines(),
    }

"""
Spans de origem e diagnósticos do parser
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    """Posição de uma entidade no arquivo (linha e coluna a partir de 1)"""
    file: str
    line: int
    column: int
    length: int = 0

    def __post_init__(self):
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"span inválido: {self.line}:{self.column}+{self.length}")


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    span: SourceSpan
    message: str
    code: str

    def format(self) -> str:
        """Formato `file:line:col: severity[code]: message`"""
        return f"{self.span.file}:{self.span.line}:{self.span.column}: {self.severity}[{self.code}]: {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "severity": self.severity,
            "code": self.code,
            "message": self.message,
            "file": self.span.file,
            "line": self.span.line,
            "column": self.span.column,
            "length": self.span.length,
        }


class ParseError(Exception):
    """Levantada quando um modelo é exigido de uma fonte com erros"""
    code = "parse-error"

    def __init__(self, diagnostics: Tuple[ParseDiagnostic, ...]):
        self.diagnostics = diagnostics
        first = diagnostics[0].format() if diagnostics else "erro de análise"
        super().__init__(f"{len(diagnostics)} diagnóstico(s); primeiro: {first}")


def format_diagnostics(diagnostics: List[ParseDiagnostic]) -> str:
    return "".join(d.format() + "\n" for d in diagnostics)

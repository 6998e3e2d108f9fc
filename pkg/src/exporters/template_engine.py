"""
Motor de templates jinja2 para DOT e relatórios de texto
"""
from pathlib import Path
from typing import Any, Dict, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from config.settings import TEMPLATES_DIR
from src.logger import debug, exception


def dot_id(value: Any) -> str:
    """Identificador DOT entre aspas"""
    return '"' + str(value).replace('\\', '\\\\').replace('"', '\\"') + '"'


class TemplateEngine:
    """Renderiza os templates de exportação"""

    def __init__(self, templates_dir: Optional[Path] = None):
        """
        Inicializa o motor de templates

        Args:
            templates_dir: Diretório onde estão os templates
        """
        self.templates_dir = Path(templates_dir or TEMPLATES_DIR)
        self.jinja_env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            autoescape=False,
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.jinja_env.filters["dot_id"] = dot_id
        debug(f"Motor de templates inicializado: {self.templates_dir}")

    def render_template(self, template_name: str, context: Dict[str, Any]) -> str:
        """
        Renderiza um template com os dados fornecidos

        Args:
            template_name: Nome do arquivo de template
            context: Dados para renderizar no template

        Returns:
            Texto renderizado
        """
        try:
            template = self.jinja_env.get_template(template_name)
            content = template.render(**context)
            debug(f"Template '{template_name}' renderizado com sucesso")
            return content
        except Exception as e:
            exception(f"Erro ao renderizar template '{template_name}'", e)
            raise


_engine: Optional[TemplateEngine] = None


def get_engine() -> TemplateEngine:
    global _engine
    if _engine is None:
        _engine = TemplateEngine()
    return _engine

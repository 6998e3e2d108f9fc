"""
Sistema de logging centralizado usando icecream

Toda a saída de diagnóstico vai para stderr; stdout fica reservado para a
saída primária dos comandos.
"""
import os
import sys
from datetime import datetime
from pathlib import Path
from icecream import ic
from typing import Any

# Níveis de logging
LOG_LEVELS = {
    'debug': 0,
    'info': 1,
    'warning': 2,
    'error': 3
}

# Prefixos por tipo de mensagem: (ícone, etiqueta ASCII)
PREFIXES = {
    'info': ("ℹ️ ", "[info]"),
    'success': ("✅", "[ok]"),
    'warning': ("⚠️ ", "[warn]"),
    'error': ("❌", "[error]"),
    'debug': ("🔍", "[debug]"),
    'progress': ("🔄", "[..]"),
    'step': ("📋", "[step]"),
    'section': ("🎯", "=="),
    'config': ("⚙️ ", "[config]"),
    'stats': ("📊", "[stats]"),
    'exception': ("💥", "[exception]"),
}


def _stderr(*args):
    print(*args, file=sys.stderr, flush=True)


# Configuração do icecream
ic.configureOutput(
    prefix='iodnet | ',
    includeContext=False,
    outputFunction=_stderr
)


class Logger:
    """Classe para logging centralizado com icecream"""

    def __init__(self, name: str = "IodNet"):
        self.name = name
        self.log_file = None
        self.log_level = self._get_log_level()
        self.use_icons = self._get_use_icons()
        if os.getenv('IODNET_LOG_FILE', 'false').lower() == 'true':
            self._setup_log_file()

    def _get_log_level(self) -> int:
        """Obtém nível de logging das variáveis de ambiente"""
        log_level_str = os.getenv('LOG_LEVEL', 'info').lower()
        return LOG_LEVELS.get(log_level_str, LOG_LEVELS['info'])

    def _get_use_icons(self) -> bool:
        """Decide se usa ícones (IODNET_COLOR=never desliga; auto só em TTY)"""
        mode = os.getenv('IODNET_COLOR', 'auto').lower()
        if mode == 'never':
            return False
        return hasattr(sys.stderr, 'isatty') and sys.stderr.isatty()

    def reconfigure(self):
        """Relê LOG_LEVEL e IODNET_COLOR (após load_dotenv ou nos testes)"""
        self.log_level = self._get_log_level()
        self.use_icons = self._get_use_icons()

    def _should_log(self, level: str) -> bool:
        """Verifica se deve fazer log baseado no nível"""
        return LOG_LEVELS.get(level, LOG_LEVELS['info']) >= self.log_level

    def _prefix(self, kind: str) -> str:
        icon, tag = PREFIXES[kind]
        return icon if self.use_icons else tag

    def _setup_log_file(self):
        """Configura arquivo de log"""
        try:
            from config.settings import LOG_DIR
            LOG_DIR.mkdir(exist_ok=True)

            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            self.log_file = Path(LOG_DIR) / f"iodnet_{timestamp}.log"

            # Configura icecream para também escrever no arquivo
            def log_to_file(*args):
                with open(self.log_file, 'a', encoding='utf-8') as f:
                    stamp = datetime.now().strftime("%H:%M:%S")
                    message = ' '.join(str(arg) for arg in args)
                    f.write(f"[{stamp}] {message}\n")
                _stderr(*args)

            ic.configureOutput(outputFunction=log_to_file)

        except Exception as e:
            _stderr(f"[warn] Erro ao configurar arquivo de log: {e}")

    def _emit(self, kind: str, message: str):
        ic(f"{self._prefix(kind)} {message}")

    def info(self, message: str):
        """Log de informação"""
        if self._should_log('info'):
            self._emit('info', message)

    def success(self, message: str):
        """Log de sucesso (nível info)"""
        if self._should_log('info'):
            self._emit('success', message)

    def warning(self, message: str):
        """Log de aviso"""
        if self._should_log('warning'):
            self._emit('warning', message)

    def error(self, message: str):
        """Log de erro"""
        if self._should_log('error'):
            self._emit('error', message)

    def debug(self, message: str):
        """Log de debug"""
        if self._should_log('debug'):
            self._emit('debug', message)

    def progress(self, message: str):
        """Log de progresso (nível info)"""
        if self._should_log('info'):
            self._emit('progress', message)

    def step(self, step: int, total: int, message: str):
        """Log de etapa com progresso (nível info)"""
        if self._should_log('info'):
            self._emit('step', f"[{step}/{total}] {message}")

    def section(self, title: str):
        """Log de seção (nível info)"""
        if self._should_log('info'):
            ic(f"{'=' * 50}")
            self._emit('section', title)
            ic(f"{'=' * 50}")

    def config(self, key: str, value: Any):
        """Log de configuração (nível info)"""
        if self._should_log('info'):
            self._emit('config', f"{key}: {value}")

    def stats(self, stats_dict: dict):
        """Log de estatísticas (nível info)"""
        if self._should_log('info'):
            self._emit('stats', "Estatísticas:")
            for key, value in stats_dict.items():
                ic(f"   {key}: {value}")

    def data(self, data: Any, label: str = "Data"):
        """Log de dados (nível debug)"""
        if self._should_log('debug'):
            ic(f"📄 {label}:", data)

    def exception(self, message: str, exception: Exception):
        """Log de exceção (nível error)"""
        if self._should_log('error'):
            self._emit('exception', f"{message}: {exception}")
            ic(f"   Tipo: {type(exception).__name__}")
            if self.log_level == LOG_LEVELS['debug']:
                import traceback
                ic(f"   Traceback: {traceback.format_exc()}")


# Instância global do logger
logger = Logger()


# Funções de conveniência
def info(message: str):
    """Log de informação"""
    logger.info(message)


def success(message: str):
    """Log de sucesso"""
    logger.success(message)


def warning(message: str):
    """Log de aviso"""
    logger.warning(message)


def error(message: str):
    """Log de erro"""
    logger.error(message)


def debug(message: str):
    """Log de debug"""
    logger.debug(message)


def progress(message: str):
    """Log de progresso"""
    logger.progress(message)


def step(step: int, total: int, message: str):
    """Log de etapa com progresso"""
    logger.step(step, total, message)


def section(title: str):
    """Log de seção"""
    logger.section(title)


def config(key: str, value: Any):
    """Log de configuração"""
    logger.config(key, value)


def stats(stats_dict: dict):
    """Log de estatísticas"""
    logger.stats(stats_dict)


def data(data: Any, label: str = "Data"):
    """Log de dados"""
    logger.data(data, label)


def exception(message: str, exception: Exception):
    """Log de exceção"""
    logger.exception(message, exception)

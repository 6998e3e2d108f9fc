#!/usr/bin/env python3
"""
IodNet - Tradução de modelos de interação UML2 (IOD/SD/TD) para HCPN e verificação
Script principal com os subcomandos validate, transform, analyze e simulate
"""
import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv

# Carrega variáveis de ambiente
load_dotenv()

from config.settings import (
    ANALYSIS_CONFIG, EXPORT_CONFIG, HCPN_EXTENSION, OUTPUT_DIR, SCHEMA_VERSIONS, SIMULATION_CONFIG, env_int,
)
from src.analyzer.properties import FAILS, HOLDS, analyze
from src.analyzer.state_space import AnalyzerError, build_state_space
from src.diagram_model.model import DiagramModelError, InteractionModel
from src.diagram_model.validator import ValidationReport, validate
from src.exporters.dot_exporter import graph_to_dot, net_to_dot
from src.exporters.json_exporter import (
    read_json, simulation_document, to_json, validation_document, write_json,
)
from src.exporters.text_exporter import pages_to_text, report_to_text, trace_to_text, validation_to_text
from src.hcpn_core.codec import flat_to_dict, hcpn_from_dict, hcpn_to_dict
from src.hcpn_core.flattener import flatten, initial_marking
from src.hcpn_core.net import FlatNet, HcpnError, HcpnModel, check_hcpn
from src.hcpn_core.simulator import TIME_DEADLOCK, Simulator
from src.hcpn_core.token_game import SimulationContext
from src.logger import config, error, exception, info, logger, section, stats, success, warning
from src.model_parser.diagnostics import ParseDiagnostic, SourceSpan, format_diagnostics
from src.model_parser.parser import parse_file
from src.transformer.builder import TransformError
from src.transformer.rule_trace import RuleTrace
from src.transformer.transformer import transform

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2
EXIT_UNKNOWN = 3

COMMANDS = ("validate", "transform", "analyze", "simulate")


class ConfigError(ValueError):
    """Configuração de execução inválida"""


@dataclass
class RunConfig:
    """Parâmetros de uma execução, vindos do ambiente e sobrescritos pela linha de comando"""
    command: str
    input: Path
    seed: int = SIMULATION_CONFIG["default_seed"]
    bound: int = ANALYSIS_CONFIG["default_bound"]
    workers: int = ANALYSIS_CONFIG["default_workers"]
    time_mode: str = "untimed"
    format: str = "text"
    output: Optional[Path] = None
    steps: int = SIMULATION_CONFIG["default_steps"]
    k: int = ANALYSIS_CONFIG["default_k"]
    trace: bool = False
    flat: bool = False
    export_graph: Optional[Path] = None
    reset_on_final: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"comando desconhecido: {self.command}")
        if self.bound < 1:
            raise ConfigError("--bound deve ser >= 1")
        if self.workers < 1:
            raise ConfigError("--workers deve ser >= 1")
        if self.steps < 1:
            raise ConfigError("--steps deve ser >= 1")
        if self.k < 0:
            raise ConfigError("--k deve ser >= 0")
        if self.time_mode not in ANALYSIS_CONFIG["time_modes"]:
            raise ConfigError(f"modo de tempo desconhecido: {self.time_mode}")
        if self.format not in EXPORT_CONFIG["formats"]:
            raise ConfigError(f"formato desconhecido: {self.format}")


def get_config_from_env() -> dict:
    """
    Obtém os padrões das variáveis de ambiente

    Returns:
        Dicionário com seed, bound, workers, time_mode e steps
    """
    return {
        "seed": env_int("IODNET_SEED", SIMULATION_CONFIG["default_seed"]),
        "bound": env_int("IODNET_BOUND", ANALYSIS_CONFIG["default_bound"]),
        "workers": env_int("IODNET_WORKERS", ANALYSIS_CONFIG["default_workers"]),
        "time_mode": os.getenv("IODNET_TIME_MODE", "untimed"),
        "steps": env_int("IODNET_STEPS", SIMULATION_CONFIG["default_steps"]),
    }


def sibling(path: Path, tag: str) -> Path:
    """`atm.hcpn.json` + `trace` -> `atm.hcpn.trace.json`"""
    return path.with_name(f"{path.stem}.{tag}{path.suffix}")


def is_hcpn_document(path: Path) -> bool:
    return path.name.endswith(HCPN_EXTENSION)


def violation_diagnostic(report: ValidationReport, filename: str) -> str:
    """Violações no formato dos diagnósticos do parser"""
    lines = []
    for v in report.violations:
        span = v.span or SourceSpan(filename, 1, 1, 0)
        lines.append(ParseDiagnostic(v.level, span, f"{v.diagram}:{v.node} {v.message}", v.rule))
    return format_diagnostics(lines)


class IodNetPipeline:
    """Classe principal: encadeia parse -> validação -> transformação -> achatamento -> análise"""

    def __init__(self, run: RunConfig):
        self.run = run

    # ------------------------------------------------------------------
    # Entrada e saída
    # ------------------------------------------------------------------

    def load_model(self) -> Optional[InteractionModel]:
        """Lê o .iom; diagnósticos vão para stderr. None se houver erros de análise"""
        result = parse_file(self.run.input)
        if result.diagnostics:
            sys.stderr.write(format_diagnostics(list(result.diagnostics)))
        return result.model

    def load_net(self) -> Tuple[Optional[HcpnModel], Optional[RuleTrace]]:
        """Obtém a HCPN a partir de um .iom ou de um .hcpn.json já transformado"""
        if is_hcpn_document(self.run.input):
            hcpn = hcpn_from_dict(read_json(self.run.input))
            trace_path = sibling(self.run.input, "trace")
            trace = RuleTrace.from_dict(read_json(trace_path)) if trace_path.exists() else None
            return hcpn, trace
        model = self.load_model()
        if model is None:
            return None, None
        return transform(model)

    def emit(self, content: str, path: Optional[Path] = None) -> None:
        """Escreve a saída primária no arquivo indicado ou em stdout"""
        target = path or self.run.output
        if target is None:
            sys.stdout.write(content)
            return
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
        success(f"Saída gravada em {target}")

    def _companion(self, tag: str) -> Path:
        base = self.run.output or OUTPUT_DIR / f"{self.run.input.name.split('.')[0]}.json"
        path = sibling(base, tag)
        if self.run.format != "json":
            path = path.with_suffix(".dot" if tag == "flat" and self.run.format == "dot" else ".txt")
        return path

    # ------------------------------------------------------------------
    # Comandos
    # ------------------------------------------------------------------

    def cmd_validate(self) -> int:
        if is_hcpn_document(self.run.input):
            problems = check_hcpn(hcpn_from_dict(read_json(self.run.input)))
            for problem in problems:
                error(problem)
            document = {"schema_version": SCHEMA_VERSIONS["validation"], "kind": "validation",
                        "valid": not problems, "violations": problems}
            self.emit(to_json(document)
                      if self.run.format == "json" else "".join(p + "\n" for p in problems))
            return EXIT_OK if not problems else EXIT_FAILURE

        model = self.load_model()
        if model is None:
            return EXIT_FAILURE
        report = validate(model)
        if report.violations:
            sys.stderr.write(violation_diagnostic(report, str(self.run.input)))
        if self.run.format == "json":
            self.emit(to_json(validation_document(report)))
        else:
            self.emit(validation_to_text(report))
        if report.is_valid:
            success(f"Modelo '{model.name}' válido ({len(model.diagrams)} diagramas)")
            return EXIT_OK
        error(f"Modelo inválido: {len(report.errors)} erro(s)")
        return EXIT_FAILURE

    def cmd_transform(self) -> int:
        hcpn, trace = self.load_net()
        if hcpn is None:
            return EXIT_FAILURE
        fmt = self.run.format
        if fmt == "json":
            self.emit(to_json(hcpn_to_dict(hcpn)))
        elif fmt == "dot":
            self.emit(net_to_dot(hcpn))
        else:
            self.emit(pages_to_text(hcpn))

        if self.run.trace and trace is not None:
            path = self._companion("trace")
            if fmt == "json":
                write_json(trace.to_dict(), path)
            else:
                self.emit(trace_to_text(trace), path)
            info(f"Trilha de regras: {path}")
        if self.run.flat:
            net = flatten(hcpn)
            path = self._companion("flat")
            if fmt == "json":
                write_json(flat_to_dict(net), path)
            elif fmt == "dot":
                self.emit(net_to_dot(net), path)
            else:
                self.emit(f"{len(net.places)} places, {len(net.transitions)} transitions, {len(net.arcs)} arcs\n", path)
            info(f"Rede achatada: {path}")
        return EXIT_OK

    def cmd_analyze(self) -> int:
        hcpn, trace = self.load_net()
        if hcpn is None:
            return EXIT_FAILURE
        net: FlatNet = flatten(hcpn)
        graph = build_state_space(net, self.run.bound, self.run.time_mode, self.run.workers,
                                  reset_on_final=self.run.reset_on_final)
        stats(graph.stats)
        report = analyze(net, graph, trace, self.run.k)

        if self.run.format == "json":
            self.emit(to_json(report.to_dict()))
        elif self.run.format == "dot":
            self.emit(graph_to_dot(graph))
        else:
            self.emit(report_to_text(report))
        if self.run.export_graph:
            if self.run.export_graph.suffix == ".dot":
                self.emit(graph_to_dot(graph), self.run.export_graph)
            else:
                write_json(graph.to_dict(), self.run.export_graph)

        for p in report.properties:
            (success if p.verdict == HOLDS else warning)(f"{p.name}: {p.verdict}")
        if report.verdict == HOLDS:
            return EXIT_OK
        return EXIT_FAILURE if report.verdict == FAILS else EXIT_UNKNOWN

    def cmd_simulate(self) -> int:
        hcpn, _ = self.load_net()
        if hcpn is None:
            return EXIT_FAILURE
        net = flatten(hcpn)
        ctx = SimulationContext(self.run.seed, timed=net.is_timed)
        log = Simulator(net, ctx).run(initial_marking(net), self.run.steps)
        if self.run.format == "json":
            self.emit(to_json(simulation_document(log, self.run.steps)))
        else:
            self.emit(log.to_text())
        info(f"Simulação encerrada: {log.status} após {len(log.records)} disparos")
        if log.status == TIME_DEADLOCK:
            error(f"{TIME_DEADLOCK}: nenhuma transição pode voltar a habilitar em {log.final_marking}")
            return EXIT_FAILURE
        return EXIT_OK

    def run_command(self) -> int:
        """
        Executa o subcomando configurado, traduzindo erros em códigos de saída

        Returns:
            0 ok, 1 falha de modelo/propriedade, 2 E/S, 3 veredito desconhecido
        """
        handler = getattr(self, f"cmd_{self.run.command}")
        try:
            section(f"iodnet {self.run.command} {self.run.input}")
            return handler()
        except (FileNotFoundError, IsADirectoryError, PermissionError, UnicodeDecodeError) as e:
            error(f"Falha de leitura/escrita: {e}")
            return EXIT_IO
        except OSError as e:
            error(f"Falha de E/S: {e}")
            return EXIT_IO
        except (TransformError, HcpnError, DiagramModelError, AnalyzerError) as e:
            error(f"{e.code}: {e}")
            return EXIT_FAILURE
        except KeyboardInterrupt:
            warning("Processo interrompido pelo usuário")
            return EXIT_FAILURE
        except Exception as e:
            exception("Erro inesperado", e)
            return EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iodnet",
        description="IodNet - IOD/SD/TD para HCPN e verificação por espaço de estados",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exemplos de uso:

1. Validar um modelo:
   python main.py validate corpus/atm.iom

2. Transformar, gravando a trilha de regras e a rede achatada:
   python main.py transform corpus/atm.iom -o output/atm.hcpn.json --format json --trace --flat

3. Analisar (deadlock, resettable, dead-transitions, bounded):
   python main.py analyze corpus/atm.iom --bound 100000 --workers 4

4. Simular com semente fixa:
   python main.py simulate corpus/sensor_td.iom --seed 7 --steps 50

Variáveis de ambiente disponíveis:
- IODNET_SEED, IODNET_BOUND, IODNET_WORKERS, IODNET_TIME_MODE, IODNET_STEPS
- IODNET_COLOR: never|auto (prefixos do log)
- IODNET_LOG_FILE: true grava o log em logs/
- LOG_LEVEL: debug|info|warning|error
        """
    )
    defaults = get_config_from_env()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", type=Path, help="Arquivo .iom ou .hcpn.json")
    common.add_argument("--format", "-f", choices=EXPORT_CONFIG["formats"], default="text",
                        help="Formato da saída primária (padrão: text)")
    common.add_argument("--output", "-o", type=Path, help="Arquivo de saída (padrão: stdout)")
    common.add_argument("--seed", type=int, default=defaults["seed"], help="Semente do gerador")
    common.add_argument("--bound", type=int, default=defaults["bound"], help="Máximo de marcações")
    common.add_argument("--workers", type=int, default=defaults["workers"], help="Threads da exploração")
    common.add_argument("--time-mode", choices=ANALYSIS_CONFIG["time_modes"], default=None,
                        help="Abstração sem tempo ou tempo discreto")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="Valida o modelo")
    transform_cmd = sub.add_parser("transform", parents=[common], help="Gera a HCPN")
    transform_cmd.add_argument("--trace", action="store_true", help="Grava a trilha de regras")
    transform_cmd.add_argument("--flat", action="store_true", help="Grava a rede achatada")
    analyze_cmd = sub.add_parser("analyze", parents=[common], help="Verifica as propriedades")
    analyze_cmd.add_argument("--k", type=int, default=ANALYSIS_CONFIG["default_k"], help="Limite de fichas")
    analyze_cmd.add_argument("--export-graph", type=Path, help="Grava o grafo (.dot ou .json)")
    analyze_cmd.add_argument("--no-reset", action="store_true",
                             help="Não liga marcações finais de volta à marcação inicial")
    simulate_cmd = sub.add_parser("simulate", parents=[common], help="Simulação semeada")
    simulate_cmd.add_argument("--steps", type=int, default=defaults["steps"], help="Máximo de disparos")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    defaults = get_config_from_env()
    return RunConfig(
        command=args.command,
        input=args.input,
        seed=args.seed,
        bound=args.bound,
        workers=args.workers,
        time_mode=args.time_mode or defaults["time_mode"],
        format=args.format,
        output=args.output,
        steps=getattr(args, "steps", defaults["steps"]),
        k=getattr(args, "k", ANALYSIS_CONFIG["default_k"]),
        trace=getattr(args, "trace", False),
        flat=getattr(args, "flat", False),
        export_graph=getattr(args, "export_graph", None),
        reset_on_final=not getattr(args, "no_reset", False),
    )


def main(argv=None) -> int:
    """Função principal"""
    logger.reconfigure()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        run = config_from_args(args)
    except ConfigError as e:
        error(str(e))
        return EXIT_IO

    config("Comando", run.command)
    config("Entrada", run.input)
    if run.command == "analyze":
        config("Limite", run.bound)
        config("Modo de tempo", run.time_mode)
    if run.command == "simulate":
        config("Semente", run.seed)

    return IodNetPipeline(run).run_command()


if __name__ == "__main__":
    sys.exit(main())

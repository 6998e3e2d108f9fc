"""
Motor de regras: InteractionModel -> (HcpnModel, RuleTrace)
"""
from dataclasses import dataclass
from typing import Dict, Set, Tuple

from src.diagram_model.hierarchy import levels, root_iod
from src.diagram_model.model import DiagramKind, InteractionModel, IodNode
from src.diagram_model.validator import validate
from src.hcpn_core.net import HcpnModel, check_hcpn
from src.logger import debug, info, success
from src.transformer.builder import (
    InvalidModelError, NetBuilder, TransformError, UnsupportedConstructError,
)
from src.transformer.iod_mapper import map_iod
from src.transformer.rule_trace import RuleTrace
from src.transformer.sd_mapper import map_sd
from src.transformer.td_mapper import map_td


@dataclass(frozen=True)
class TransformOptions:
    validate: bool = True


class TransformContext:
    """Estado compartilhado pelos mapeadores durante uma transformação"""

    def __init__(self, model: InteractionModel, builder: NetBuilder):
        self.model = model
        self.builder = builder
        self.levels: Dict[str, int] = levels(model)
        self._mapped: Set[str] = set()

    def map_child(self, node: IodNode, parent_page: str) -> str:
        """
        Cria a página do diagrama referenciado por um nó de interação

        Returns:
            Identificador da página filha
        """
        diagram = self.model.require_diagram(node.ref.target)
        if diagram.id in self._mapped:
            raise TransformError(f"diagrama {diagram.id} referenciado mais de uma vez", diagram.id)
        self._mapped.add(diagram.id)
        page_id = f"{parent_page}/{node.id}"
        level = self.levels[diagram.id]
        if diagram.kind is DiagramKind.IOD:
            map_iod(diagram, level, self, page_id, parent_page)
        elif diagram.kind is DiagramKind.SD:
            map_sd(diagram, self, page_id, parent_page, level)
        else:
            map_td(diagram, self, page_id, parent_page, level)
        return page_id


def _check_supported(model: InteractionModel) -> None:
    root = root_iod(model)
    for iod in model.iods:
        # IOD referenciado sem nós de interação: folha sem comportamento
        if root is not None and iod.id != root.id and not iod.interaction_nodes:
            raise UnsupportedConstructError("leaf-iod", iod.id)
    for sd in model.sds:
        for msg in sd.messages:
            if msg.is_found:
                raise UnsupportedConstructError("found-message", f"{sd.id}:{msg.name}")
            if msg.is_lost:
                raise UnsupportedConstructError("lost-message", f"{sd.id}:{msg.name}")


def transform(model: InteractionModel, options: TransformOptions = TransformOptions()) -> Tuple[HcpnModel, RuleTrace]:
    """
    Traduz o modelo hierárquico em uma HCPN

    O IOD de nível 0 vira a página principal; cada nó de interação vira uma
    transição de substituição cuja página é gerada pelo mapeador do tipo do
    diagrama referenciado (IOD, SD ou TD).

    Args:
        model: Modelo de interação
        options: Opções da transformação

    Returns:
        Tupla (HcpnModel, RuleTrace)

    Raises:
        InvalidModelError: modelo com violações de nível erro
        UnsupportedConstructError: mensagens found/lost ou IOD folha sem SD/TD
        TransformError: rede gerada viola as invariantes HCPN
    """
    if options.validate:
        report = validate(model)
        if not report.is_valid:
            first = report.errors[0]
            raise InvalidModelError(f"modelo inválido: {first.rule} em {first.diagram}:{first.node}", report)
    _check_supported(model)

    root = root_iod(model)
    if root is None:
        raise InvalidModelError("o modelo precisa de exatamente um IOD raiz")

    info(f"Transformando '{model.name}' a partir do IOD raiz {root.id}")
    builder = NetBuilder(model.name)
    ctx = TransformContext(model, builder)
    ctx._mapped.add(root.id)
    map_iod(root, 0, ctx, root.id)
    hcpn, trace = builder.build()

    problems = check_hcpn(hcpn)
    if problems:
        raise TransformError(f"erro interno do transformador: {problems[0]}")
    debug(f"{len(trace.entries)} entradas na trilha de regras")
    success(f"HCPN gerada: {len(hcpn.pages)} páginas, {len(hcpn.places)} lugares, "
            f"{len(hcpn.transitions)} transições")
    return hcpn, trace

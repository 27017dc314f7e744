# app/services/bayes_net/structure_service.py - Network DAG construction and validation
import logging
from typing import Iterable, List, Sequence, Tuple

import networkx as nx

from app.models.network_models import NetworkStructure
from app.services.discretizer.discretization_service import BER, CI, DOP_PHI, EBN0, MOD
from app.services.errors import StructureError

logger = logging.getLogger(__name__)


def default_structure() -> NetworkStructure:
    """MOD, EbN0, C/I and Dop_Phi all feed BER; edge order is the CPT parent order"""
    return NetworkStructure(
        nodes=(MOD, EBN0, CI, DOP_PHI, BER),
        edges=((MOD, BER), (EBN0, BER), (CI, BER), (DOP_PHI, BER)),
    )


def build_structure(nodes: Sequence[str], edges: Iterable[Tuple[str, str]]) -> NetworkStructure:
    structure = NetworkStructure(nodes=tuple(nodes), edges=tuple(tuple(e) for e in edges))
    validate_structure(structure)
    return structure


def _as_graph(structure: NetworkStructure) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(structure.nodes)
    graph.add_edges_from(structure.edges)
    return graph


def validate_structure(structure: NetworkStructure) -> None:
    """Raise StructureError on duplicate or undeclared nodes, self loops or cycles"""
    declared = set(structure.nodes)
    if len(declared) != len(structure.nodes):
        raise StructureError(f"duplicate node names in {list(structure.nodes)}")

    for parent, child in structure.edges:
        for endpoint in (parent, child):
            if endpoint not in declared:
                raise StructureError(f"edge {parent}->{child} uses undeclared node {endpoint!r}")

    if len(set(structure.edges)) != len(structure.edges):
        raise StructureError("duplicate edges")

    graph = _as_graph(structure)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        path = " -> ".join(edge[0] for edge in cycle) + f" -> {cycle[0][0]}"
        raise StructureError(f"cycle detected: {path}")

    logger.debug(f"Structure ok: {len(structure.nodes)} nodes, {len(structure.edges)} edges")


def topological_order(structure: NetworkStructure) -> List[str]:
    """Parents before children; ties keep declaration order"""
    validate_structure(structure)
    position = {name: i for i, name in enumerate(structure.nodes)}
    return list(nx.lexicographical_topological_sort(_as_graph(structure), key=position.get))

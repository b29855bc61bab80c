"""Multi-action process algebra with splitting, bisimulation and Reo connectors."""
from .equivalence import KERNEL, Partition, Verdict, Witness, bisimilar, reduce
from .multiactions import TAU, MultiAction, acts_of, is_tau, join, submulti, subtract
from .process import Definition, Specification, acts, gamma, is_sequential, is_tau_free, validate
from .regions import async_regions, sync_region, sync_regions
from .reo import ConnectorTopology, compose, connected, parse_topology, primitive
from .semantics import LTS, TERMINATED, explore, explore_term, from_aut, step, to_aut
from .splitting import (
    SubstitutionEnvironment,
    coisolate,
    isolate,
    make_env,
    qmark,
    replace_with_split,
    split,
    split_spec,
)
from .syntax import format_spec, format_term, parse, parse_term

__version__ = "0.1.0"

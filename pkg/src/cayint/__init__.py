"""cayint: exact integrality of undirected Cayley graphs over finite groups."""

from .groups import (GroupTable, SubgroupDescriptor, ActionTable, GroupError,
                     BoundExceededError, cyclic, direct_product,
                     semidirect_product, element_order, order_spectrum,
                     conjugacy_classes, center, subgroup_generated,
                     subgroup_table, normal_subgroups, quotient_group,
                     isomorphic, find_isomorphism, is_abelian, exponent)
from .presentations import (Presentation, parse_presentation, parse_word,
                            todd_coxeter, build_gij, PresentationError,
                            EnumerationError)
from .catalog import catalog, group_from_spec, manifest, identify
from .spectral import (ConnectionSet, AdjacencyMatrix, SpectrumReport,
                       cayley_adjacency, char_poly, charpoly_berkowitz,
                       split_integer_roots, is_integral_graph, SpectralError)
from .polynomials import IntPolynomial
from .characters import (CyclotomicInt, CharacterTable, EigenvalueEntry,
                         character_table, bh1_spectrum, is_rational_table,
                         UnsupportedGroupError)
from .search import (SubsetSpace, IntegralityVerdict, subset_space,
                     is_cayley_integral, fast_reject_order,
                     boolean_algebra_sets, classify_catalog)

__version__ = "0.1.0"

"""Constructors and audits for the standard families of examples."""

from .abstract import (
    INF, Clifford, Embedded, ReillyFragment, chain_semilattice, clifford, embed_abstract,
    reilly_fragment, semilattice,
)
from .conjugation import ConjugationAction, characters, conjugate, conjugation_action
from .cuntz_krieger import (
    CKFragment, CKMatrix, CylinderSet, PrefixMap, RelationReport, ck_free_audit, ck_relations,
    ck_semigroup, is_marker, marker_conditions, marker_map, marker_words, periodic_fixed_point,
    reduce_word, word_map,
)
from .dynamics import (
    GlimmLocalization, GroupoidMatch, WordSpace, gamma, glimm_generators, glimm_localization,
    match_principal_groupoids, odometer, odometer_successor, radices_at,
)
from .free import FreeAudit, free_localization_audit

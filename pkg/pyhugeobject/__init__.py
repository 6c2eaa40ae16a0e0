"""
Package containing core pyhugeobject functionality.
"""
import logging

from pyhugeobject import error
from pyhugeobject.error import (
    HugeObjectBaseError,
    HugeObjectInitializationError,
    HugeObjectDistributionError,
    HugeObjectDimensionError,
    HugeObjectBudgetError,
    HugeObjectOracleError,
    HugeObjectPreconditionError,
    HugeObjectConstructionError,
    HugeObjectSolverError,
    HugeObjectConfigError,
)

from pyhugeobject import core
from pyhugeobject.core import (
    BitVector,
    Permutation,
    ExplicitDistribution,
    QueryBudget,
    HugeObjectOracle,
)

from pyhugeobject import metrics
from pyhugeobject.metrics import (
    emd_exact,
    emd_lp,
    emd_up_to_index_permutation,
)

from pyhugeobject import cluster
from pyhugeobject.cluster import (
    ClusterLearnParams,
    LearnOutcome,
    VcLearnParams,
    test_and_learn,
    test_vc_property,
)

from pyhugeobject import codes
from pyhugeobject.codes import (
    GaloisField,
    GapGeometry,
    SeCode,
    GeCode,
)

from pyhugeobject import gap
from pyhugeobject.gap import (
    PermutationRecovery,
    AdaptiveOutcome,
    find_permutation,
    alg_adaptive,
)

from pyhugeobject import instances
from pyhugeobject.instances import (
    PvcParams,
    SuppHardParams,
)

from pyhugeobject import transforms
from pyhugeobject.transforms import TesterProgram

from pyhugeobject import report
from pyhugeobject.report import ResultRecord

logging.getLogger(__name__).addHandler(logging.NullHandler())


__all__ = [
    'error',
    'HugeObjectBaseError',
    'HugeObjectInitializationError',
    'HugeObjectDistributionError',
    'HugeObjectDimensionError',
    'HugeObjectBudgetError',
    'HugeObjectOracleError',
    'HugeObjectPreconditionError',
    'HugeObjectConstructionError',
    'HugeObjectSolverError',
    'HugeObjectConfigError',
    'core',
    'BitVector',
    'Permutation',
    'ExplicitDistribution',
    'QueryBudget',
    'HugeObjectOracle',
    'metrics',
    'emd_exact',
    'emd_lp',
    'emd_up_to_index_permutation',
    'cluster',
    'ClusterLearnParams',
    'LearnOutcome',
    'VcLearnParams',
    'test_and_learn',
    'test_vc_property',
    'codes',
    'GaloisField',
    'GapGeometry',
    'SeCode',
    'GeCode',
    'gap',
    'PermutationRecovery',
    'AdaptiveOutcome',
    'find_permutation',
    'alg_adaptive',
    'instances',
    'PvcParams',
    'SuppHardParams',
    'transforms',
    'TesterProgram',
    'report',
    'ResultRecord',
]

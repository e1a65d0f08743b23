"""walkslab: a workbench for minimal walks over ordinal notations below
epsilon_0 - exact CNF arithmetic, club-sequence providers, one- and
two-cardinal walk engines, the graded rho_phi coloring, thin lists,
independent families, and a scenario-driven property-suite runner."""

from .cseq import (
    AvoidReport,
    CSeqProvider,
    CanonicalProvider,
    TableProvider,
    TableSpec,
    avoid_check,
    canonical_provider,
    coherence_count,
    table_provider,
)
from .errors import (
    BudgetError,
    InfiniteWindowError,
    OrdinalParseError,
    PairingError,
    ProviderError,
    ValidationError,
    WalkslabError,
)
from .fpsets import FpSet, Part, as_fpset
from .grid import GridSpec
from .lists import (
    BranchResult,
    CandidatePool,
    FipResult,
    IndexedFamily,
    ListContext,
    PairingTable,
    ThinReport,
    b_member,
    branch_search,
    d_of,
    fip_witness,
    g_member,
    indep_family,
    levels,
    thin_report,
)
from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    classify,
    format_ordinal,
    left_divides,
    left_subtract,
    ord_add,
    ord_cmp,
    ord_divmod,
    ord_max,
    ord_mul,
    omega_power,
    parse_ordinal,
)
from .rhophi import PhiFamily, capital_lambda, phi_eval, rho_phi
from .scenario import Scenario, build_scenario, bundled_scenario_path, load_scenario
from .suites import ScenarioReport, SuiteResult, run_scenario
from .twowalks import (
    Partition,
    SetCSeq,
    SetCseqReport,
    TwoWalkTrace,
    color_c,
    canonical_set_club,
    find_triples,
    fp_member,
    fp_restrict,
    fp_strict_sup,
    set_cseq_validate,
    step_color,
    triple_min,
    two_walk,
)
from .walks import (
    WalkTrace,
    WindowReport,
    WindowRow,
    endpoint_row,
    lambda_bar_of,
    lambda_of,
    rho0,
    rho2,
    walk_trace,
    window_report,
)

__version__ = "0.1.0"

"""Python access to the frequency-locking toolkit."""

from ._ilfd import (  # noqa: F401
    Error,
    FirstOrderData,
    FitResult,
    Forcing,
    LimitCycle,
    Resonance,
    ScanSettings,
    SecondOrderData,
    SystemParams,
    TongueResult,
    WronskianData,
    build_variational,
    find_limit_cycle,
    first_order,
    fit_monomial,
    is_locked,
    kernel_functions,
    rescale,
    scan_tongue,
    second_order,
    selection_rule,
    staircase,
)


def first_order_width(alpha=5.0, beta=4.0, p=2, q=1, forcing="sin"):
    """Linear-in-mu width coefficient of the p:q tongue."""
    cycle = find_limit_cycle(alpha, beta)
    res = Resonance(p, q)
    w = rescale(build_variational(cycle), cycle, res.rho)
    f = Forcing.parse(forcing)
    return first_order(cycle, w, kernel_functions(cycle, w, res), f).width

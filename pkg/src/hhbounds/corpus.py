"""Built-in verification corpus.

The corpus crosses function families (quadratic, exponential, quartic,
smooth trig mix, abs-bearing, linear) with identity and in-range phi maps,
powers q in {1, 2, 3}, and moduli spanning {0, roughly half the maximum,
roughly the maximum}. The moduli were chosen against fine-grid estimates of
the largest admissible modulus (min of half the second derivative for the
smooth targets) so that every certificate passes and every bound bracket
stays nonnegative.

The abs-bearing entries put the derivative kink at x = 1/3, which no default
grid or mixture point can hit: every sampled mixture is a multiple of
1/1280, and in binary floating point 3*u - 1 cannot vanish there.
"""

from __future__ import annotations

from .funcspec import Interval, PhiMap, ProblemSpec, validate
from .expr import parse

__all__ = ["CORPUS_CONFIGS", "corpus_configs", "corpus_specs", "spec_from_config"]

# entries mirror the CLI config schema
CORPUS_CONFIGS = (
    {"id": "sq-id-q1-flat", "f": "x^2", "a": 0, "b": 1, "phi": "identity",
     "q": 1, "c_f": 0.0, "c_deriv": 0.0},
    {"id": "sq-id-q1-extremal", "f": "x^2", "a": 0, "b": 1, "phi": "identity",
     "q": 1, "c_f": 1.0, "c_deriv": 0.0},
    {"id": "sq-id-q2-mid", "f": "x^2", "a": 0, "b": 1, "phi": "identity",
     "q": 2, "c_f": 1.0, "c_deriv": 2.0},
    {"id": "sq-id-q2-flat", "f": "x^2", "a": 0, "b": 1, "phi": "identity",
     "q": 2, "c_f": 0.5, "c_deriv": 0.0},
    {"id": "exp-id-q1-mid", "f": "exp(x)", "a": 0, "b": 1, "phi": "identity",
     "q": 1, "c_f": 0.25, "c_deriv": 0.25},
    {"id": "exp-id-q2-full", "f": "exp(x)", "a": 0, "b": 1, "phi": "identity",
     "q": 2, "c_f": 0.5, "c_deriv": 2.0},
    {"id": "quartic-id-q2", "f": "x^4", "a": 0, "b": 1, "phi": "identity",
     "q": 2, "c_f": 0.0, "c_deriv": 0.0},
    {"id": "quart-id-q2-mid", "f": "x^4 + x^2", "a": 0, "b": 1, "phi": "identity",
     "q": 2, "c_f": 1.0, "c_deriv": 2.0},
    {"id": "quart-id-q1-flat", "f": "x^4 + x^2", "a": 0, "b": 1, "phi": "identity",
     "q": 1, "c_f": 0.5, "c_deriv": 0.0},
    {"id": "mix-id-q3-full", "f": "x^2 + 1 - cos(x)", "a": 0, "b": 1,
     "phi": "identity", "q": 3, "c_f": 1.25, "c_deriv": 0.0},
    {"id": "mix-id-q2-mid", "f": "x^2 + 1 - cos(x)", "a": 0, "b": 1,
     "phi": "identity", "q": 2, "c_f": 0.6, "c_deriv": 2.0},
    {"id": "abs-id-q1", "f": "abs(3*x - 1)", "a": 0, "b": 1, "phi": "identity",
     "q": 1, "c_f": 0.0, "c_deriv": 0.0},
    {"id": "abs-id-q2", "f": "abs(3*x - 1)", "a": 0, "b": 1, "phi": "identity",
     "q": 2, "c_f": 0.0, "c_deriv": 0.0},
    {"id": "sq-affine-q2", "f": "x^2", "a": 0, "b": 1, "phi": "0.25 + 0.5*x",
     "q": 2, "c_f": 1.0, "c_deriv": 2.0},
    {"id": "exp-phisq-q2", "f": "exp(x)", "a": 0, "b": 1, "phi": "x^2",
     "q": 2, "c_f": 0.25, "c_deriv": 1.0},
    {"id": "quart-affine-q1", "f": "x^4 + x^2", "a": 0, "b": 1,
     "phi": "0.25 + 0.5*x", "q": 1, "c_f": 1.0, "c_deriv": 1.5},
    {"id": "linear-id-q1", "f": "2*x + 1", "a": 0, "b": 1, "phi": "identity",
     "q": 1, "c_f": 0.0, "c_deriv": 0.0},
)


def spec_from_config(cfg: dict) -> ProblemSpec:
    """Build an unvalidated ProblemSpec from a config mapping."""
    from .funcspec import GridConfig

    grid_cfg = cfg.get("grid", {})
    grid = GridConfig(
        n_x=int(grid_cfg.get("n_x", 41)),
        n_y=int(grid_cfg.get("n_y", 41)),
        n_t=int(grid_cfg.get("n_t", 33)),
    )
    return ProblemSpec(
        f=parse(cfg["f"]),
        interval=Interval(float(cfg["a"]), float(cfg["b"])),
        phi=PhiMap.from_source(str(cfg.get("phi", "identity"))),
        c=float(cfg.get("c", 0.0)),
        q=float(cfg.get("q", 1.0)),
        quad_tol=float(cfg.get("quad_tol", 1e-10)),
        grid=grid,
        c_f=None if cfg.get("c_f") is None else float(cfg["c_f"]),
        c_deriv=None if cfg.get("c_deriv") is None else float(cfg["c_deriv"]),
        spec_id=str(cfg.get("id", "spec")),
    )


def corpus_configs() -> list[dict]:
    return [dict(cfg) for cfg in CORPUS_CONFIGS]


def corpus_specs() -> list[ProblemSpec]:
    """The validated built-in corpus, in report order."""
    return [validate(spec_from_config(cfg)) for cfg in CORPUS_CONFIGS]

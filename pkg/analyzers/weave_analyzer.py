# analyzers/weave_analyzer.py

import logging
from typing import Optional

from config import Settings
from cli.problem import Problem
from core.errors import NotAFusionFrameError
from core.weaving import operator_lower_bound, synthesis_norm_check, universal_weaving_bounds

SHARPENING_TOL = 1e-12


class WeaveAnalyzer:
    """
    Universal weaving bounds, the weaving decision and the operator lower bound.
    Invariant checks that need a second sweep only run below the per-pattern limit.
    """

    def __init__(self, settings: Settings, per_pattern: Optional[bool] = None):
        self.settings = settings
        self.per_pattern = per_pattern

    def handle(self, problem: Problem) -> dict:
        report = universal_weaving_bounds(problem.v, problem.w, self.settings, per_pattern=self.per_pattern)
        results = report.to_dict()

        try:
            alpha, floor = operator_lower_bound(problem.v, problem.w, self.settings)
            results["operator_lower_bound"] = {"alpha": alpha, "lemma_floor": floor}
        except NotAFusionFrameError as e:
            logging.info(f"operator lower bound skipped: {e}")
            results["operator_lower_bound"] = {"error": str(e)}

        scale = max(1.0, report.universal_upper)
        checks = {
            "spectral_sharpening": abs(report.universal_lower - report.alpha) <= SHARPENING_TOL * scale,
            "lemma_floor": report.lemma_floor_holds,
            "sharp_floor": report.universal_lower >= report.sharp_floor - 1e-9,
        }
        if not report.sampled and problem.size < self.settings.per_pattern_limit:
            swapped = universal_weaving_bounds(problem.w, problem.v, self.settings, per_pattern=False)
            checks["pattern_symmetry"] = (
                abs(swapped.universal_lower - report.universal_lower) <= SHARPENING_TOL * scale
                and abs(swapped.universal_upper - report.universal_upper) <= SHARPENING_TOL * scale
            )
            checks["synthesis_norms"] = synthesis_norm_check(problem.v, problem.w, self.settings).holds

        logging.info(f"weaving decision: woven={report.woven} ({report.status})")
        return {"results": results, "checks": checks, "property": report.woven}

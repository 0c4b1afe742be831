# analyzers/lift_analyzer.py

import logging

from config import Settings
from cli.problem import Problem
from core.lifting import LocalFrameSystem, equivalence_check


class LiftAnalyzer:
    """
    Weaving of the fusion frames against weaving of the lifted local frames.
    Members without supplied local frames use their own orthonormal basis.
    """

    def __init__(self, settings: Settings):
        self.settings = settings

    def handle(self, problem: Problem) -> dict:
        v_system = problem.v_local or LocalFrameSystem.orthonormal(problem.v)
        w_system = problem.w_local or LocalFrameSystem.orthonormal(problem.w)
        report = equivalence_check(v_system, w_system, settings=self.settings)
        checks = {
            "flags_agree": report.flags_agree,
            "near_threshold": report.near_threshold,
            "lower_sandwich": report.lower_sandwich,
            "upper_sandwich": report.upper_sandwich,
            "converse_lower": report.converse_lower,
            "converse_upper": report.converse_upper,
        }
        logging.info(f"lift: woven_fusion={report.woven_fusion} woven_vectors={report.woven_vectors}")
        return {
            "results": report.to_dict(),
            "checks": checks,
            "property": report.woven_fusion and report.woven_vectors,
            "consistent": report.holds,
        }

# analyzers/bounds_analyzer.py

import logging

from config import Settings
from cli.problem import Problem
from core.frames import fusion_bounds, is_fusion_bessel, is_orthonormal_fusion_basis


class BoundsAnalyzer:
    """Optimal fusion frame bounds of each family on its own."""

    def __init__(self, settings: Settings):
        self.settings = settings

    def family_summary(self, family) -> dict:
        report = fusion_bounds(family, self.settings.frame_tol)
        _, bessel = is_fusion_bessel(family)
        summary = report.to_dict()
        summary.update({
            "size": family.size,
            "subspace_dims": [s.dim for s in family.subspaces],
            "bessel_bound": bessel,
            "orthonormal_basis": is_orthonormal_fusion_basis(family),
        })
        return summary

    def handle(self, problem: Problem) -> dict:
        results = {"V": self.family_summary(problem.v), "W": self.family_summary(problem.w)}
        both = results["V"]["is_frame"] and results["W"]["is_frame"]
        logging.info(f"fusion bounds: V={results['V']['is_frame']} W={results['W']['is_frame']}")
        return {"results": results, "checks": {}, "property": both}

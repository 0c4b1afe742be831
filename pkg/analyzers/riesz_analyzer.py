# analyzers/riesz_analyzer.py

from typing import Optional

from config import Settings
from cli.problem import Problem
from core.weaving import is_orthonormal_weaving_basis, is_woven_riesz


class RieszAnalyzer:
    def __init__(self, settings: Settings, per_pattern: Optional[bool] = None):
        self.settings = settings
        self.per_pattern = per_pattern

    def handle(self, problem: Problem) -> dict:
        is_riesz, report = is_woven_riesz(problem.v, problem.w, settings=self.settings, per_pattern=self.per_pattern)
        results = report.to_dict()
        results["orthonormal_weaving_basis"] = is_orthonormal_weaving_basis(problem.v, problem.w, self.settings)
        checks = {"nonzero_spectra_agree": report.max_spectrum_gap <= 1e-9}
        return {"results": results, "checks": checks, "property": is_riesz}

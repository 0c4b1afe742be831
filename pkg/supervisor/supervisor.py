# supervisor/supervisor.py

import logging
import time
from typing import Literal, Optional

from analyzers.bounds_analyzer import BoundsAnalyzer
from analyzers.lift_analyzer import LiftAnalyzer
from analyzers.riesz_analyzer import RieszAnalyzer
from analyzers.weave_analyzer import WeaveAnalyzer
from cli.problem import Problem, demo_problem
from config import Settings
from core.errors import (
    FrameToolkitError,
    PatternCapExceededError,
    ProblemParseError,
    UnknownDemoError,
)

Command = Literal["bounds", "weave", "riesz", "lift", "demo"]
COMMANDS = ("bounds", "weave", "riesz", "lift", "demo")

EXIT_OK = 0
EXIT_PROPERTY_FALSE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


# -----------------------------
# Demo expectations
# -----------------------------
def _close(a: float, b: float, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol


def _expect(name: str, expected, actual, ok: bool) -> dict:
    return {"name": name, "expected": expected, "actual": actual, "ok": bool(ok)}


def demo_expectations(name: str, outcome: dict) -> list:
    weave = outcome["weave"]["results"]
    riesz = outcome["riesz"]["results"]
    lift = outcome["lift"]["results"]
    bounds = [weave["universal_lower"], weave["universal_upper"]]

    if name == "example1":
        return [
            _expect("universal bounds", [1.0, 2.0], bounds, _close(bounds[0], 1) and _close(bounds[1], 2)),
            _expect("woven", True, weave["woven"], weave["woven"]),
            _expect("riesz weaving", False, riesz["is_riesz_weaving"], not riesz["is_riesz_weaving"]),
            _expect("lifted bounds", [1.0, 2.0], lift["lifted_bounds"],
                    _close(lift["lifted_bounds"][0], 1) and _close(lift["lifted_bounds"][1], 2)),
            _expect("flags agree", True, lift["flags_agree"], lift["flags_agree"]),
        ]
    if name == "example2":
        witness = weave["argmin_pattern"]["w_indices"]
        return [
            _expect("universal lower", 0.0, bounds[0], bounds[0] <= 1e-12),
            _expect("woven", False, weave["woven"], not weave["woven"]),
            _expect("witness W indices", [1], witness, witness == [1]),
            _expect("lifted woven", False, lift["woven_vectors"], not lift["woven_vectors"]),
        ]
    # orthonormal
    return [
        _expect("universal bounds", [1.0, 1.0], bounds, _close(bounds[0], 1) and _close(bounds[1], 1)),
        _expect("riesz weaving", True, riesz["is_riesz_weaving"], riesz["is_riesz_weaving"]),
        _expect("riesz bounds", [1.0, 1.0], [riesz["universal_lower"], riesz["universal_upper"]],
                _close(riesz["universal_lower"], 1) and _close(riesz["universal_upper"], 1)),
        _expect("orthonormal weaving basis", True, riesz["orthonormal_weaving_basis"],
                riesz["orthonormal_weaving_basis"]),
    ]


class Supervisor:
    """
    Central dispatcher: routes a command to its analyzer, merges the results
    into one response and decides the exit code.
    """

    def __init__(self, settings: Settings, per_pattern: Optional[bool] = None):
        self.settings = settings
        self.analyzers = {
            "bounds": BoundsAnalyzer(settings),
            "weave": WeaveAnalyzer(settings, per_pattern),
            "riesz": RieszAnalyzer(settings, per_pattern),
            "lift": LiftAnalyzer(settings),
        }

    def _run_demo(self, name: str, n: Optional[int]) -> dict:
        problem = demo_problem(name, n)
        outcome = {cmd: self.analyzers[cmd].handle(problem) for cmd in ("weave", "riesz", "lift")}
        expectations = demo_expectations(name, outcome)
        return {
            "results": {"demo": name, "ambient_dim": problem.ambient_dim, "size": problem.size, **outcome},
            "checks": {e["name"]: e["ok"] for e in expectations},
            "expectations": expectations,
            "property": all(e["ok"] for e in expectations),
        }

    def run(
        self,
        command: str,
        problem: Optional[Problem] = None,
        demo: Optional[str] = None,
        n: Optional[int] = None,
    ) -> dict:
        logging.info(f"Received command: {command} ({problem.source if problem else f'demo:{demo}'})")
        started = time.perf_counter()
        response = {
            "command": command,
            "source": problem.source if problem else f"demo:{demo}",
            "options": self.settings.echo(),
            "results": None,
            "checks": {},
            "property": None,
            "exit_code": EXIT_OK,
            "error": None,
        }

        try:
            if command == "demo":
                if not demo:
                    raise UnknownDemoError("demo needs a name")
                outcome = self._run_demo(demo, n)
                response.update(outcome)
                response["exit_code"] = EXIT_OK if outcome["property"] else EXIT_NUMERICAL
            elif command in self.analyzers:
                if problem is None:
                    problem = demo_problem(demo, n) if demo else None
                if problem is None:
                    raise ProblemParseError(f"{command} needs a problem file or --demo")
                outcome = self.analyzers[command].handle(problem)
                response.update(outcome)
                if not outcome.pop("consistent", True):
                    response["exit_code"] = EXIT_NUMERICAL
                    response["error"] = "lifted and fusion weaving disagree or the bound sandwich fails"
                else:
                    response["exit_code"] = EXIT_OK if outcome["property"] else EXIT_PROPERTY_FALSE
            else:
                raise ProblemParseError(f"unknown command '{command}'; choose one of {', '.join(COMMANDS)}")

        except (ProblemParseError, UnknownDemoError, PatternCapExceededError) as e:
            logging.error(f"Usage error: {e}")
            response.update({"error": str(e), "exit_code": EXIT_USAGE})
        except FrameToolkitError as e:
            logging.error(f"Numerical failure: {e}")
            response.update({"error": str(e), "exit_code": EXIT_NUMERICAL})
        except Exception as e:
            logging.error(f"Error during {command}: {e}")
            response.update({"error": f"{type(e).__name__}: {e}", "exit_code": EXIT_NUMERICAL})

        response.pop("consistent", None)
        response["elapsed_seconds"] = time.perf_counter() - started
        logging.info(f"{command} finished in {response['elapsed_seconds']:.3f}s with exit code {response['exit_code']}")
        return response

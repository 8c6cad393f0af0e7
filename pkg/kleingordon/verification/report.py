#!/usr/bin/env python3
"""
Verification report: JSON body plus a plain-text summary table
"""

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

from .base import CheckResult


@dataclass(frozen=True)
class SuiteOutcome:
    name: str
    anchors: Tuple[str, ...]
    checks: Tuple[CheckResult, ...]
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(check.passed for check in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'name': self.name,
            'anchors': list(self.anchors),
            'passed': self.passed,
            'checks': [check.to_dict() for check in self.checks],
        }
        if self.error is not None:
            out['error'] = self.error
        return out


@dataclass(frozen=True)
class Report:
    suites: Tuple[SuiteOutcome, ...]
    environment: Dict[str, Any] = field(default_factory=dict)

    @property
    def checks(self) -> List[CheckResult]:
        return [check for suite in self.suites for check in suite.checks]

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    @property
    def errors(self) -> List[SuiteOutcome]:
        """Suites that raised before finishing"""
        return [suite for suite in self.suites if suite.error is not None]

    def body(self) -> Dict[str, Any]:
        """Everything except the timestamp; identical configs give identical bodies"""
        return {
            'passed': self.passed,
            'environment': self.environment,
            'suites': [suite.to_dict() for suite in self.suites],
        }

    def body_json(self) -> str:
        return json.dumps(self.body(), indent=2)

    def to_json(self, generated_at: Optional[str] = None) -> str:
        if generated_at is None:
            generated_at = datetime.now(timezone.utc).isoformat()
        return json.dumps({'generated_at': generated_at, 'report': self.body()}, indent=2)

    def summary_table(self) -> str:
        lines = [f"{'suite':<24} {'check':<36} {'residual':>12} {'tolerance':>12}  result"]
        lines.append('-' * len(lines[0]))
        for suite in self.suites:
            if suite.error is not None:
                lines.append(f"{suite.name:<24} {'(suite error)':<36} {'':>12} {'':>12}  ❌ {suite.error}")
            for check in suite.checks:
                relation = '>=' if check.kind == 'min' else '<='
                mark = '✅' if check.passed else '❌'
                lines.append(f"{suite.name:<24} {check.name:<36} {check.residual:>12.3e} "
                             f"{relation}{check.tolerance:>10.1e}  {mark}")
        total = len(self.checks)
        lines.append('-' * len(lines[0]))
        status = f"{total - len(self.failures)}/{total} checks passed"
        if self.errors:
            status += f", {len(self.errors)} suite error(s)"
        lines.append(f"{status} - {'PASS' if self.passed else 'FAIL'}")
        return '\n'.join(lines)

#!/usr/bin/env python3
"""
Registry of verification suites in canonical order
"""

import logging
from typing import List, Optional

from ..errors import ConfigError
from .base import Suite
from .suites import canonical_suites

logger = logging.getLogger(__name__)


class SuiteFactory:
    """Looks up suites by name; iteration order is the report order"""

    def __init__(self):
        self._suites: List[Suite] = list(canonical_suites())

    def get_suite(self, name: str) -> Suite:
        for suite in self._suites:
            if suite.can_handle(name):
                logger.debug("Returning " + type(suite).__name__)
                return suite
        raise ConfigError(f"unknown suite {name!r}; available: {', '.join(self.list_names())}")

    def register_suite(self, suite: Suite, priority: Optional[int] = None):
        """Register a new suite with optional position"""
        if priority is None:
            self._suites.append(suite)
        else:
            self._suites.insert(priority, suite)

    def list_names(self) -> List[str]:
        return [suite.name for suite in self._suites]

    def ordered(self, names: List[str]) -> List[Suite]:
        """Suites for `names`, validated, de-duplicated and in canonical order"""
        wanted = set()
        for name in names:
            self.get_suite(name)
            wanted.add(name)
        return [suite for suite in self._suites if suite.name in wanted]


# Global factory instance
suite_factory = SuiteFactory()

#!/usr/bin/env python3
"""
Configuration settings for the field toolkit
"""

import os
from typing import Dict, Any, Optional


def _optional_int(value: Optional[str]) -> Optional[int]:
    if value is None or value.strip().lower() in ['', 'none', 'null', '0', 'false']:
        return None
    return max(1, int(value))


class Config:
    """Configuration class for toolkit settings"""

    def __init__(self):
        # Parallelism: caps the worker pool running verification suites
        self.KG_THREADS = _optional_int(os.getenv('KG_THREADS'))

        # Physics defaults
        self.DEFAULT_SEED = int(os.getenv('KG_DEFAULT_SEED', '20060217'))
        self.DEFAULT_MASS = float(os.getenv('KG_DEFAULT_MASS', '1.0'))
        self.DEFAULT_B = float(os.getenv('KG_DEFAULT_B', '1.0'))

        # Desk-scale grid sizes used by the verify command
        self.GRID_1D = int(os.getenv('KG_GRID_1D', '256'))
        self.GRID_2D = int(os.getenv('KG_GRID_2D', '64'))
        self.GRID_3D = int(os.getenv('KG_GRID_3D', '32'))

        # Logging settings
        self.LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()

    @property
    def worker_count(self) -> int:
        """Threads for the suite pool"""
        if self.KG_THREADS is not None:
            return self.KG_THREADS
        return os.cpu_count() or 1

    def default_grids(self) -> list:
        """Grid specs for 1d, 2d and 3d runs"""
        two_pi = 6.283185307179586
        return [
            {'dim': 1, 'points': [self.GRID_1D], 'lengths': [two_pi]},
            {'dim': 2, 'points': [self.GRID_2D] * 2, 'lengths': [two_pi] * 2},
            {'dim': 3, 'points': [self.GRID_3D] * 3, 'lengths': [two_pi] * 3},
        ]

    def update_from_env(self):
        """Reload configuration from environment variables"""
        self.__init__()

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return {
            'defaults': {
                'seed': self.DEFAULT_SEED,
                'mass': self.DEFAULT_MASS,
                'b': self.DEFAULT_B,
            },
            'grids': self.default_grids(),
            'logging': {
                'level': self.LOG_LEVEL
            }
        }


class DevelopmentConfig(Config):
    """Development configuration with additional debug features"""

    def __init__(self):
        super().__init__()
        self.LOG_LEVEL = os.getenv('LOG_LEVEL', 'DEBUG').upper()


class ProductionConfig(Config):
    """Production configuration with quiet logging"""

    def __init__(self):
        super().__init__()
        self.LOG_LEVEL = os.getenv('LOG_LEVEL', 'WARNING').upper()


class TestingConfig(Config):
    """Testing configuration"""

    def __init__(self):
        super().__init__()
        self.LOG_LEVEL = 'DEBUG'
        self.GRID_1D = 64    # Smaller grids for testing
        self.GRID_2D = 16
        self.GRID_3D = 8


# Configuration factory
def get_config(env: Optional[str] = None) -> Config:
    """Get configuration based on environment"""
    if env is None:
        env = os.getenv('KG_ENV', 'development')

    config_map = {
        'development': DevelopmentConfig,
        'production': ProductionConfig,
        'testing': TestingConfig
    }

    config_class = config_map.get(env.lower(), DevelopmentConfig)
    return config_class()


# Default configuration instance
config = get_config()

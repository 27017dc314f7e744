# app/services/experiment/__init__.py
from .comparison_service import classify_row, compare_cpt, doppler_sensitivity, total_variation
from .file_service import FileService
from .grid_service import GridPoint, build_grid, iter_grid, sample_in_state, seeds_for
from .processing_service import run_experiment, run_scenarios
from .report_service import ReportService

__all__ = [
    'classify_row',
    'compare_cpt',
    'doppler_sensitivity',
    'total_variation',
    'FileService',
    'GridPoint',
    'build_grid',
    'iter_grid',
    'sample_in_state',
    'seeds_for',
    'run_experiment',
    'run_scenarios',
    'ReportService',
]

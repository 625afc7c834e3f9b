from mckp.runner import SolverRunner
from mckp.core.models import Instance, ChoiceVector, Outcome, validate_instance
from mckp.core.bissa import BissaOptions, BissaReport, run_bissa

__version__ = "1.0.0"
__all__ = ['SolverRunner', 'Instance', 'ChoiceVector', 'Outcome', 'validate_instance',
           'BissaOptions', 'BissaReport', 'run_bissa']

"""
CSV serialization of joint pmfs.
"""

from pathlib import Path
from typing import Optional, Union
import logging

import pandas as pd

from config import settings
from .base import JointPMF


logger = logging.getLogger(__name__)

HEADER_TAG = "countcompat-jointpmf"


def joint_pmf_header(joint: JointPMF, digits: int) -> str:
    return f"# {HEADER_TAG} n={joint.n} N={joint.N} mass={joint.captured_mass:.{digits}g}"


def write_joint_pmf_csv(
    joint: JointPMF,
    path: Union[str, Path],
    digits: Optional[int] = None
) -> Path:
    """
    Write a joint pmf as CSV.
    
    Rows index the first coordinate and columns the second. A 3-d tensor is
    written as one block per leading index, blocks separated by a blank line.
    
    Args:
        joint: Joint pmf
        path: Output file
        digits: Significant digits (defaults to settings.csv_digits)
        
    Returns:
        The written path
    """
    digits = settings.csv_digits if digits is None else digits
    path = Path(path)
    float_format = f"%.{digits}g"
    probs = joint.probs
    if joint.n == 1:
        blocks = [probs[:, None]]
    elif joint.n == 2:
        blocks = [probs]
    else:
        blocks = [probs[k].reshape(probs.shape[1], -1) for k in range(probs.shape[0])]
    with path.open("w", newline="") as f:
        f.write(joint_pmf_header(joint, digits) + "\n")
        for index, block in enumerate(blocks):
            if index:
                f.write("\n")
            pd.DataFrame(block).to_csv(f, header=False, index=False, float_format=float_format)
    logger.info(f"Wrote joint pmf ({joint.n}-d, N={joint.N}) to {path}")
    return path

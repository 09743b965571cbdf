"""Background/foreground segmentation of screen-content images.

Separates smooth background from sparse foreground (text, graphics) in
image blocks using either RANSAC robust regression or ADMM-based sparse
decomposition, inside a multi-mode quadtree pipeline.
"""

from .basis import (
    BasisKind,
    BasisMatrix,
    basis_rmse_study,
    dct_basis,
    get_basis,
    ortho_poly_basis,
    zigzag_order,
)
from .blocks import Coefficients, ForegroundMask, PixelBlock, Plane
from .errors import (
    DatasetError,
    DegenerateInputError,
    InputError,
    NumericalDivergenceError,
    ParameterError,
    ScsegError,
)
from .metrics import EvalReport, evaluate_dataset, f1, precision_recall
from .pipeline import (
    BlockDecision,
    Method,
    Mode,
    SegmentationConfig,
    classify_text_on_constant,
    is_pure_background,
    is_smooth_background,
    mode_statistics,
    pad_to_multiple,
    reconstruct_background,
    rgb_to_ycbcr,
    segment_block,
    segment_image,
    verify_chrominance,
)
from .ransac import RansacResult, ransac_segment
from .regression import (
    LadResult,
    inlier_mask,
    lad_fit,
    least_squares_fit,
    residuals,
)
from .sparse import (
    DifferenceOperator,
    SdResult,
    admm_solve,
    difference_operator,
    sd_segment,
    soft_threshold,
    total_variation,
)

__version__ = "0.1.0"

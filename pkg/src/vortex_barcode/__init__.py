"""Betti-number barcodes of barycentric vortex nerves on triangulated video frames."""

from .barcode import (
    Barcode,
    PersistenceInterval,
    ShrinkPlan,
    assemble_barcode,
    persistence_intervals,
    read_barcode,
    shrink,
    write_barcode,
)
from .frames import (
    BinaryFrame,
    Centroid,
    GrayFrame,
    HoleRegion,
    binarize,
    compute_centroids,
    label_holes,
    load_frames,
)
from .geometry import (
    Barycenter,
    CirclePosition,
    Point2,
    Triangle,
    Triangulation,
    barycenter,
    delaunay_triangulate,
    in_circle,
    polygon_contains,
)
from .nerve import AlexandroffNerve, MncSelection, maximal_nerves, vertex_star
from .pipeline import FrameReport, PipelineConfig, run_pipeline
from .vortex import (
    BettiResult,
    Filament,
    VortexCycle,
    VortexNerve,
    attach_filaments,
    betti_number,
    build_inner_cycle,
    build_vortex_nerve,
    expand_ring,
    reduce_path_word,
)

__version__ = "0.1.0"

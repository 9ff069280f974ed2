from .section import (
    ExplicitSection,
    FiberPath,
    RadialSection,
    SectionS1,
    build_section_s1,
    fiber_path,
    projection_section,
    radial_section,
    verify_section,
)
from .transport import (
    TubePath,
    base_loop,
    circle_arc,
    great_circle_loop,
    horizontal_lift,
    horizontal_velocity,
    monodromy,
    parallel_transport,
)
from .tube import (
    TubePoint,
    ball_draw,
    check_tube,
    draw_rng,
    in_tube,
    minimal_norm_step,
    project_to_level,
    sample_fiber,
    smallest_singular_value,
    tube_point,
)

__all__ = [
    "ExplicitSection",
    "FiberPath",
    "RadialSection",
    "SectionS1",
    "TubePath",
    "TubePoint",
    "ball_draw",
    "base_loop",
    "build_section_s1",
    "check_tube",
    "circle_arc",
    "draw_rng",
    "fiber_path",
    "great_circle_loop",
    "horizontal_lift",
    "horizontal_velocity",
    "in_tube",
    "minimal_norm_step",
    "monodromy",
    "parallel_transport",
    "project_to_level",
    "projection_section",
    "radial_section",
    "sample_fiber",
    "smallest_singular_value",
    "tube_point",
    "verify_section",
]

"""
Initializes the services package, making the planner, verification and
trace functions available from the top-level `milnorplan.services` namespace.
"""
from .harness import (
    verify_all,
    verify_section_cmd,
    verify_sphere,
    verify_task,
    verify_transport,
    verify_tube,
)
from .taskplan import (
    TaskPlan,
    TaskPlanner,
    base_parity,
    base_sphere_dim,
    plan_task,
    project_planner,
    pullback_section,
    summarize,
    task_region,
    tc_value,
)
from .trace import TraceFile, export_trace, parse_trace, read_trace, render_trace, sample_trace

__all__ = [
    "TaskPlan",
    "TaskPlanner",
    "TraceFile",
    "base_parity",
    "base_sphere_dim",
    "export_trace",
    "parse_trace",
    "plan_task",
    "project_planner",
    "pullback_section",
    "read_trace",
    "render_trace",
    "sample_trace",
    "summarize",
    "task_region",
    "tc_value",
    "verify_all",
    "verify_section_cmd",
    "verify_sphere",
    "verify_task",
    "verify_transport",
    "verify_tube",
]

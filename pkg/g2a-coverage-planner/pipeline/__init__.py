"""Pipeline module for the G2A Coverage Planner: scenarios, network runs, reports."""

from pipeline.export import combined_table, export_combined, export_reports, load_manifest
from pipeline.planner import ALGORITHMS, PlanningPipeline, RunManifest, TriangleRecord, triangle_seed
from pipeline.scenario import OptimizerSettings, Scenario, load_scenario, save_scenario
from pipeline.sweeps import height_sweep, threshold_sweep

__all__ = [
    "ALGORITHMS",
    "OptimizerSettings",
    "PlanningPipeline",
    "RunManifest",
    "Scenario",
    "TriangleRecord",
    "combined_table",
    "export_combined",
    "export_reports",
    "height_sweep",
    "load_manifest",
    "load_scenario",
    "save_scenario",
    "threshold_sweep",
    "triangle_seed",
]

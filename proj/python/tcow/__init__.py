"""Object-permanence ground truth: scene generation, mask rendering,
occlusion and containment labels, baselines, metrics and loss."""

import json

from ._tcow import (
    CONTAINMENT_THRESHOLD,
    OCCLUSION_THRESHOLD,
    DataError,
    annotate,
    bce,
    bootstrap_schedule,
    bootstrapped_bce,
    containment_fraction,
    default_loss_config,
    frame_iou,
    generate_container_script,
    generate_occlusion_pass,
    generate_random_clutter,
    occlusion_weight,
    render,
    run_cli,
    soft_jaccard,
)


def load_scene(scene_json):
    """Parsed scene dict from the JSON text returned by the generators."""
    return json.loads(scene_json)


__all__ = [
    "CONTAINMENT_THRESHOLD",
    "OCCLUSION_THRESHOLD",
    "DataError",
    "annotate",
    "bce",
    "bootstrap_schedule",
    "bootstrapped_bce",
    "containment_fraction",
    "default_loss_config",
    "frame_iou",
    "generate_container_script",
    "generate_occlusion_pass",
    "generate_random_clutter",
    "load_scene",
    "occlusion_weight",
    "render",
    "run_cli",
    "soft_jaccard",
]

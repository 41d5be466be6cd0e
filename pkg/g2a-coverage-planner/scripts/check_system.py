"""Smoke test: run each planning stage once on the bundled equilateral scenario."""

import sys
from pathlib import Path

from loguru import logger

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from config import config, configure_logging, validate_config  # noqa: E402
from coverage.network import average_gcr  # noqa: E402
from pipeline import PlanningPipeline, load_scenario  # noqa: E402
from prisms.overlap import PrismStructure, analytic_overlap  # noqa: E402
from rf.channel import ChannelParams, path_loss  # noqa: E402

SCENARIO = config.get_data_path("scenarios/equilateral_3.json")


def test_config():
    """Test configuration."""
    try:
        ok = validate_config()
        if ok:
            logger.success("✓ Config: valid")
        return ok
    except Exception as e:
        logger.error(f"✗ Config error: {e}")
        return False


def test_channel():
    """Test path loss model."""
    try:
        pl = path_loss(1000.0, 100.0, ChannelParams.load("RMa-AV", 2.6))
        logger.success(f"✓ Channel: PL(1 km, 100 m) = {pl:.2f} dB")
        return abs(pl - 101.685) < 0.05
    except Exception as e:
        logger.error(f"✗ Channel error: {e}")
        return False


def test_prisms():
    """Test analytic overlap ratios."""
    try:
        zetas = {
            kind: analytic_overlap(PrismStructure(kind=kind, coverage_radius=1.0, height=1.0)).zeta
            for kind in ("TP", "SP", "HP")
        }
        logger.success(f"✓ Prisms: {', '.join(f'{k}={v:.3f}' for k, v in zetas.items())}")
        return zetas["TP"] < zetas["SP"] < zetas["HP"]
    except Exception as e:
        logger.error(f"✗ Prisms error: {e}")
        return False


def test_aggregation():
    """Test area-weighted averaging."""
    try:
        value = average_gcr([(1.0, 0.8), (3.0, 0.9)])
        logger.success(f"✓ Aggregation: {value:.4f}")
        return abs(value - 0.875) < 1e-12
    except Exception as e:
        logger.error(f"✗ Aggregation error: {e}")
        return False


def test_pipeline():
    """Test one downtilt and one SLBC network run."""
    try:
        scenario = load_scenario(SCENARIO)
        pipeline = PlanningPipeline(scenario, workers=1)
        baseline = pipeline.run_network("downtilt")
        optimized = pipeline.run_network("slbc")
        logger.success(
            f"✓ Pipeline: downtilt {baseline.network.average_gcr:.3f}, slbc {optimized.network.average_gcr:.3f}"
        )
        return optimized.network is not None
    except Exception as e:
        logger.error(f"✗ Pipeline error: {e}")
        return False


def main():
    """Run all checks."""
    configure_logging()
    logger.info("Testing G2A Coverage Planner...")

    tests = [
        ("Config", test_config),
        ("Channel", test_channel),
        ("Prisms", test_prisms),
        ("Aggregation", test_aggregation),
        ("Pipeline", test_pipeline),
    ]

    results = []
    for name, test_func in tests:
        logger.info(f"\nTesting {name}...")
        results.append((name, test_func()))

    # Summary
    logger.info("\n" + "=" * 50)
    logger.info("TEST SUMMARY")
    logger.info("=" * 50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for name, result in results:
        status = "✓ PASS" if result else "✗ FAIL"
        logger.info(f"{name:20s}: {status}")

    logger.info("=" * 50)
    logger.info(f"Total: {passed}/{total} tests passed")

    return 0 if passed == total else 1


if __name__ == "__main__":
    exit(main())

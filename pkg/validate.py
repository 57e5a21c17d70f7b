#!/usr/bin/env python3
"""
Heavy-tailed MST Lab - Validation Suite - Standalone Script
Runs every oracle check and exits nonzero when one fails
"""

import asyncio
import sys
import argparse
from pathlib import Path

def parse_arguments():
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        description="Heavy-tailed MST Lab - run the oracle validation suite"
    )

    parser.add_argument(
        "--config",
        dest="config_path",
        type=str,
        help="Path to the JSON configuration file (default: config.json)"
    )

    parser.add_argument(
        "--seed",
        type=int,
        help="Master seed; each check derives its own seed from it"
    )

    parser.add_argument(
        "--trials",
        type=int,
        help="Monte-Carlo trials per check in the quick profile"
    )

    parser.add_argument(
        "--profile",
        choices=("full", "quick"),
        help="full: published sample sizes and thresholds (default); quick: --trials samples per check"
    )

    parser.add_argument(
        "--weights-file",
        dest="weights_file",
        type=str,
        help="Also check that this weight file parses"
    )

    parser.add_argument(
        "--out",
        dest="out_dir",
        type=str,
        help="Directory for validation.csv"
    )

    return parser.parse_args()

async def main():
    """Main entry point"""
    args = parse_arguments()

    # Setup logging
    from loguru import logger
    logger.remove()
    logger.add(
        sys.stdout,
        level="INFO",
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
        colorize=True
    )

    # Import validation functionality
    try:
        from src import ConfigError, ConfigManager
        from src.experiments import run_validate
    except ImportError as e:
        print(f"Error importing validation module: {e}")
        print("Make sure you're running this from the repository root")
        sys.exit(1)

    print("🔄 Heavy-tailed MST Lab - Validation Suite")
    print("=" * 40)

    overrides = {
        "seed": args.seed,
        "trials": args.trials,
        "profile": args.profile,
        "weights_file": args.weights_file,
        "out_dir": args.out_dir,
    }
    try:
        manager = ConfigManager(Path(args.config_path) if args.config_path else None)
        cfg = manager.build_experiment_config("validate", overrides)
    except ConfigError as e:
        print(f"❌ Configuration error: {e}")
        return 2

    result = await run_validate(cfg)

    print(f"\n📊 Checks passed: {result.summary['passed']}/{result.summary['checks']}")
    if result.failures:
        print("\n❌ Failed checks:")
        for message in result.failures:
            print(f"  - {message}")
        return 1

    print("\n✅ All checks passed")
    return 0

if __name__ == "__main__":
    sys.exit(asyncio.run(main()))

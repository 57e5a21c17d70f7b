#!/usr/bin/env python3
"""
Heavy-tailed MST Lab - CLI Interface
"""

import asyncio
import sys
import argparse
from pathlib import Path

EXPERIMENT_HELP = {
    "generate": "Sample percolation ensembles and tabulate graph statistics",
    "mst": "MST of the giant with its critical-window restrictions",
    "scaling": "Typical MST distance against n (log-log slope vs eta)",
    "critical-window": "Nested Hausdorff distances, masses and surpluses across lambda",
    "dimension": "Covering numbers and box-counting slope of the MST",
    "validate": "Run the oracle validation suite",
}


def parse_arguments(argv=None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        description="Heavy-tailed MST Lab - simulate MSTs of rank-1 random graphs with tau in (3, 4)",
        epilog="""
Examples:
  %(prog)s scaling --tau 3.5 --replicas 20 --plot
  %(prog)s critical-window --n 100000 --lambdas 5 10 20 40
  %(prog)s mst --n 2000 --lambdas 1 2 4 --out results/mst
  %(prog)s validate --seed 7
        """,
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    subparsers = parser.add_subparsers(dest="experiment", required=True, metavar="EXPERIMENT")

    for name, help_text in EXPERIMENT_HELP.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument("--config", dest="config_path", type=str, help="Path to the JSON configuration file")
        sub.add_argument("--seed", type=int, help="Master seed (unsigned 64-bit)")
        sub.add_argument("--replicas", type=int, help="Replicas per system size")
        sub.add_argument("--out", dest="out_dir", type=str, help="Output directory for CSV and SVG files")
        sub.add_argument("--threads", type=int, help="Worker processes for replicas")
        sub.add_argument("--plot", action="store_true", default=None, help="Also render SVG plots")
        sub.add_argument("--n", dest="n_values", type=int, nargs="+", help="System sizes")
        sub.add_argument("--tau", type=float, help="Tail exponent in (3, 4)")
        sub.add_argument("--c", type=float, help="Weight prefactor in w_i = c (n / i)^(1 / (tau - 1))")
        sub.add_argument("--lambdas", type=float, nargs="+", help="Critical-window parameters, ascending")
        sub.add_argument("--pairs", type=int, help="Vertex pairs per replica for typical distances")
        sub.add_argument("--trials", type=int, help="Monte-Carlo trials per validation check in the quick profile")
        sub.add_argument("--profile", choices=("full", "quick"),
                         help="Validation profile: published sample sizes (full) or --trials samples (quick)")
        sub.add_argument("--kernel", type=str, help="Edge kernel: product-full-L or product-minus-ell")
        sub.add_argument("--weights-file", dest="weights_file", type=str,
                         help="Read the weight sequence from a one-column file")
        sub.add_argument("--Delta", dest="Delta", type=float, help="Exponent slack Delta in (0, 1/2]")
        sub.add_argument("--delta1", type=float, help="Outside-graph offset delta_1")

    return parser.parse_args(argv)


# Parse arguments early so we can show help even if imports fail
try:
    args = parse_arguments()
except SystemExit:
    # argparse calls sys.exit() for --help, let it through
    raise

# Now try to import required dependencies
try:
    import aiofiles
    import matplotlib
    import numpy
    import scipy
    import tqdm
    from loguru import logger
except ImportError as e:
    print(f"Error: Missing required dependency: {e}")
    print("Please install the required packages:")
    print("pip install -r requirements.txt")
    sys.exit(1)


# Configure logging
def setup_logging():
    """Setup loguru logging to both file and stdout"""
    # Remove default handler
    logger.remove()

    # Add stdout handler with INFO level
    logger.add(
        sys.stdout,
        level="INFO",
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
        colorize=True
    )

    # Add file handler with DEBUG level
    logger.add(
        "simulations.log",
        level="DEBUG",
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} | {message}",
        rotation="10 MB",
        retention="7 days",
        compression="zip"
    )

    logger.info("Logging initialized - writing to simulations.log")


# Setup logging
setup_logging()


# Import our modules
from src import RUNNERS, ConfigError, ConfigManager, WeightFileError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


class SimulationCLI:
    """Command Line Interface for the simulation laboratory"""

    def __init__(self, args=None):
        self.args = args or argparse.Namespace()
        config_path = getattr(self.args, 'config_path', None)
        self.config_manager = ConfigManager(Path(config_path) if config_path else None)

    def overrides(self) -> dict:
        """Command-line values that replace configured settings"""
        keys = ("seed", "replicas", "out_dir", "threads", "plot", "n_values", "tau", "c", "lambdas", "pairs",
                "trials", "profile", "kernel", "weights_file", "Delta", "delta1")
        return {key: getattr(self.args, key, None) for key in keys}

    def print_summary(self, result):
        print(f"\n📊 {result.name} results:")
        for path in result.files:
            print(f"  {path}")
        if result.summary:
            print(f"\n📈 Summary:")
            for key, value in result.summary.items():
                print(f"  {key}: {value}")

    async def run(self) -> int:
        """Main CLI execution; returns the process exit code"""
        name = self.args.experiment
        logger.info(f"Starting experiment {name}")
        print("Heavy-tailed MST Lab")
        print("=" * 40)

        try:
            cfg = self.config_manager.build_experiment_config(name, self.overrides())
            logger.info(f"Configuration: seed={cfg.seed}, n={list(cfg.n_values)}, tau={cfg.tau}, "
                        f"replicas={cfg.replicas}, out={cfg.out_dir}")
            result = await RUNNERS[name](cfg)
        except (ConfigError, WeightFileError) as e:
            logger.error(f"Configuration error: {e}")
            print(f"❌ Configuration error: {e}")
            return EXIT_CONFIG

        self.print_summary(result)
        if not result.success:
            logger.error(f"{name} finished with {len(result.failures)} failure(s)")
            print(f"\n❌ {len(result.failures)} failure(s):")
            for message in result.failures:
                print(f"  - {message}")
            return EXIT_FAILURE

        logger.success(f"{name} completed")
        print(f"\n✅ {name} completed")
        return EXIT_OK


async def main():
    """Main entry point"""
    cli = SimulationCLI(args)
    return await cli.run()


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))

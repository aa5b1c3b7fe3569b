#!/usr/bin/env python3
"""
sfcheck: vérificateur statique et générateur de VCs
"""

import argparse
import sys

from config.run_config import RunConfig
from config.settings import DEFAULT_FORMAT, EXIT_INTERNAL, OUTPUT_FORMATS
from pipeline.runner import PipelineRunner
from utils.logger import setup_logger

logger = setup_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfcheck",
        description="Vérifie un programme annoté et émet ses conditions de vérification",
    )
    parser.add_argument("file", help="fichier source annoté")
    parser.add_argument("--check", action="store_true", help="légalité et conditions sur les variables")
    parser.add_argument("--emit-vcs", action="store_true", help="émettre les VCs (si aucune erreur)")
    parser.add_argument("--dump-analysis", action="store_true", help="afficher vars/mod/req/par par procédure")
    parser.add_argument("--classify", action="store_true", help="afficher la classification des variables")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=DEFAULT_FORMAT, help="format de sortie")
    parser.add_argument("-o", "--output", default=None, help="fichier de sortie (défaut: sortie standard)")
    return parser


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    return RunConfig(
        input_path=args.file,
        check=args.check,
        emit_vcs=args.emit_vcs,
        dump_analysis=args.dump_analysis,
        classify=args.classify,
        output_format=args.format,
        output_path=args.output,
    )


def main(argv=None) -> int:
    config = config_from_args(argv)
    return PipelineRunner(config).execute()


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Interrompu par l'utilisateur")
        sys.exit(EXIT_INTERNAL)

#!/usr/bin/env python3
"""
Octaflip - bistellar moves and the 8-vertex pseudomanifold census

Main entry point and CLI handler.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

from . import __version__
from . import ui
from .bistellar import MoveError, NeighbourlyError, apply_move, enumerate_moves, parse_face, run_script
from .catalog import CatalogError, get_catalog
from .classify import ClassificationError, enumerate_weak_2pm, run_census, write_outputs
from .complexes import (
    Complex,
    ComplexError,
    FacetParseError,
    degree_sequence_label,
    format_complex,
    format_face,
    link,
    parse_facets,
    read_complex,
    read_facet_text,
    write_complex,
)
from .config import CensusConfig
from .covering import CoveringError, SimplicialMap, check_branched_covering, read_map, verify_n24_quotient
from .homology import homology
from .iso import are_isomorphic, format_cycles
from .recognition import classify_surface, recognize, recognize_facets


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INTEGRITY = 3


def setup_logging(verbose: bool = False, debug: bool = False) -> None:
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def print_json(data: Any) -> None:
    ui.emit(json.dumps(data, indent=2, sort_keys=True))


def output_complex(K: Complex, output: Optional[str], header: Optional[str] = None) -> None:
    if output:
        write_complex(K, output, header)
        ui.show_success(f"Wrote {len(K)} facets to {output}")
    else:
        ui.emit(format_complex(K, header))


# ============================================
# COMMAND HANDLERS
# ============================================

def cmd_verify(args) -> int:
    """Recognition report; affirmative iff the input is a normal pseudomanifold."""
    path = Path(args.file)
    if path.suffix == ".json":
        report = recognize(read_complex(path))
    else:
        report = recognize_facets(parse_facets(read_facet_text(path), str(path)))
    data = report.to_dict()
    if args.json:
        print_json(data)
    else:
        ui.show_recognition(data)
    return EXIT_OK if report.is_normal else EXIT_NEGATIVE


def cmd_links(args) -> int:
    K = read_complex(args.file)
    if K.dim != 3:
        raise ComplexError(f"Invalid complex: link types need dimension 3, got {K.dim}")
    catalog = get_catalog()
    rows = []
    for v in K.vertices:
        lk = link(K, 1 << v)
        rows.append((v, classify_surface(lk).kind, degree_sequence_label(lk), catalog.match_surface(lk)))
    if args.json:
        print_json([
            {"vertex": v, "kind": kind, "degree_sequence": degrees, "name": name}
            for v, kind, degrees, name in rows
        ])
    else:
        ui.show_links(rows)
    return EXIT_OK


def cmd_moves(args) -> int:
    K = read_complex(args.file)
    indices = [args.index] if args.index is not None else list(range(1, K.dim))
    moves = [move for i in indices for move in enumerate_moves(K, i)]
    if args.json:
        print_json([
            {"i": move.i, "alpha": format_face(move.alpha), "beta": format_face(move.beta)} for move in moves
        ])
    else:
        for move in moves:
            ui.emit(str(move))
        if not moves:
            ui.show_info(f"No bistellar moves of index {', '.join(str(i) for i in indices)}")
    return EXIT_OK


def either(positional: Optional[str], option: Optional[str], what: str) -> str:
    """The value given positionally or by flag, but not both."""
    if positional is not None and option is not None:
        raise ValueError(f"Invalid arguments: {what} given both positionally and as a flag")
    value = option if option is not None else positional
    if value is None:
        raise ValueError(f"Invalid arguments: missing {what}")
    return value


def cmd_apply(args) -> int:
    face = either(args.face, args.face_flag, "face")
    K = read_complex(args.file)
    result = apply_move(K, parse_face(face), args.fresh)
    output_complex(result, args.output, f"kappa_{face}")
    return EXIT_OK


def cmd_script(args) -> int:
    script = either(args.script, args.steps, "script")
    K = read_complex(args.file)
    result = run_script(K, script)
    output_complex(result, args.output, script)
    return EXIT_OK


def cmd_iso(args) -> int:
    K = read_complex(args.first)
    L = read_complex(args.second)
    result = are_isomorphic(K, L)
    if args.json:
        print_json({
            "isomorphic": result.is_isomorphic,
            "witness": format_cycles(result.bijection) if result.bijection else None,
            "invariant": result.invariant,
            "detail": result.detail,
        })
    elif result:
        ui.show_success(f"Isomorphic via {format_cycles(result.bijection)}")
    else:
        ui.show_warning(f"Not isomorphic: {result.detail}")
    return EXIT_OK if result else EXIT_NEGATIVE


def cmd_homology(args) -> int:
    profile = homology(read_complex(args.file))
    if args.json:
        print_json({
            "groups": [str(g) for g in profile.groups],
            "betti": list(profile.betti),
            "torsion": [list(g.torsion) for g in profile.groups],
            "euler_characteristic": profile.euler_characteristic(),
        })
    else:
        ui.show_homology(profile.lines())
    return EXIT_OK


def cmd_cover(args) -> int:
    if args.cover_command == "quotient":
        report = verify_n24_quotient()
        data = {
            "k": report.k,
            "branch_locus": sorted(report.branch_locus),
            "cover_f_vector": list(report.cover_f_vector),
            "cover_is_sphere": report.cover_is_sphere,
        }
        if args.json:
            print_json(data)
        else:
            ui.show_success(
                f"2-fold branched covering of N_24 by a {report.cover_f_vector[0]}-vertex 3-sphere, "
                f"branch locus {sorted(report.branch_locus)}"
            )
        return EXIT_OK
    f = SimplicialMap(read_complex(args.source), read_complex(args.target), read_map(args.map))
    certificate = check_branched_covering(f)
    if args.json:
        print_json({
            "covering": certificate is not None,
            "k": certificate.k if certificate else None,
            "branch_locus": sorted(certificate.branch_locus) if certificate else None,
        })
    elif certificate:
        ui.show_success(f"{certificate.k}-fold branched covering, branch locus {sorted(certificate.branch_locus)}")
    else:
        ui.show_warning("Not a branched covering: facet preimage counts differ")
    return EXIT_OK if certificate else EXIT_NEGATIVE


def cmd_catalog(args) -> int:
    catalog = get_catalog()
    if args.catalog_command == "list":
        rows = []
        for name in catalog.names():
            entry = catalog.entry(name)
            rows.append((name, entry.describe_source(), ", ".join(str(v) for v in entry.meta.values())))
        if args.json:
            print_json([{"name": n, "source": s, "notes": m} for n, s, m in rows])
        else:
            ui.show_catalog_list(rows)
        return EXIT_OK
    if args.catalog_command == "get":
        output_complex(catalog.get(args.name), args.output, args.name)
        return EXIT_OK
    names = args.names or catalog.names()
    results = [catalog.verify_entry(name) for name in names]
    if args.json:
        print_json([result.to_dict() for result in results])
    else:
        ui.show_verification(results)
    failed = [r.name for r in results if not r.passed]
    if failed:
        if not args.json:
            ui.show_error(f"Integrity failures: {', '.join(failed)}")
        return EXIT_INTEGRITY
    if not args.json:
        ui.show_success(f"All {len(results)} catalog entries verified")
    return EXIT_OK


def cmd_classify(args) -> int:
    config = CensusConfig({
        "vertices": args.vertices,
        "exhaustive": args.exhaustive,
        "symmetry": not args.no_symmetry,
        "jobs": args.jobs,
        "output_dir": args.output_dir,
    })
    logger.info(f"Census settings: {config.to_dict()}")
    census = run_census(config)
    paths = write_outputs(census, config.output_dir)
    data = census.to_dict()
    if args.json:
        print_json({"counts": data["counts"], "layer_sizes": data["layer_sizes"], "files": [str(p) for p in paths]})
    else:
        ui.show_census(data["counts"], data["layer_sizes"])
        ui.show_success(f"Wrote {', '.join(p.name for p in paths)} to {config.output_dir}")
    return EXIT_OK


def cmd_enumerate_surfaces(args) -> int:
    n = CensusConfig.check_surface_vertices(args.vertices)
    catalog = get_catalog()
    rows = []
    for index, K in enumerate(enumerate_weak_2pm(n), 1):
        kind = classify_surface(K).kind
        degrees = degree_sequence_label(K)
        rows.append((index, degrees, kind, catalog.surface_name(n, kind, degrees)))
    if args.json:
        print_json([
            {"index": i, "degree_sequence": degrees, "kind": kind, "name": name}
            for i, degrees, kind, name in rows
        ])
    else:
        ui.show_surfaces(rows)
    return EXIT_OK


# ============================================
# ARGUMENT PARSING
# ============================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="octaflip",
        description="Octaflip - bistellar moves and the 8-vertex pseudomanifold census",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0  success / affirmative answer
  1  negative verdict (not isomorphic, not a normal pseudomanifold, face not removable)
  2  usage error or malformed input
  3  catalog integrity or classification discrepancy

Examples:
  octaflip verify P1.cplx
  octaflip iso n5.cplx n6.cplx
  octaflip script n7.cplx "67;56;238;348" -o n8.cplx
  octaflip catalog verify
  octaflip classify --vertices 8 --jobs 4 -o census/
        """
    )
    parser.add_argument('--version', action='version', version=f'Octaflip {__version__}')
    parser.add_argument('--verbose', action='store_true', help='Log progress at INFO level')
    parser.add_argument('--debug', action='store_true', help='Log at DEBUG level')
    commands = parser.add_subparsers(dest='command', required=True)

    def add(name: str, help_text: str, json_flag: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        if json_flag:
            sub.add_argument('--json', action='store_true', help='Print JSON')
        return sub

    sub = add('verify', 'Recognize pseudomanifold properties of a facet list')
    sub.add_argument('file')
    sub = add('links', 'Classify every vertex link of a 3-complex')
    sub.add_argument('file')
    sub = add('moves', 'List removable faces')
    sub.add_argument('file')
    sub.add_argument('-i', '--index', '--dim', dest='index', type=int, help='Move index i (default: all proper moves)')
    sub = add('apply', 'Apply one bistellar move', json_flag=False)
    sub.add_argument('file')
    sub.add_argument('face', nargs='?', help='Face alpha, e.g. 238 or "1 10 11"')
    sub.add_argument('--face', dest='face_flag', metavar='FACE', help='Same as the positional face')
    sub.add_argument('--fresh', type=int, help='New vertex for a 0-move')
    sub.add_argument('-o', '--output')
    sub = add('script', 'Run a move script (innermost step first)', json_flag=False)
    sub.add_argument('file')
    sub.add_argument('script', nargs='?', help='Semicolon-separated faces, e.g. "67;56;238;348"')
    sub.add_argument('--steps', metavar='SCRIPT', help='Same as the positional script')
    sub.add_argument('-o', '--output')
    sub = add('iso', 'Decide isomorphism of two complexes')
    sub.add_argument('first')
    sub.add_argument('second')
    sub = add('homology', 'Integer homology')
    sub.add_argument('file')

    sub = add('cover', 'Branched coverings', json_flag=False)
    cover = sub.add_subparsers(dest='cover_command', required=True)
    check = cover.add_parser('check', help='Certify a simplicial map as a branched covering')
    check.add_argument('source')
    check.add_argument('target')
    check.add_argument('map', help='File of "source target" vertex pairs')
    check.add_argument('--json', action='store_true', help='Print JSON')
    quotient = cover.add_parser('quotient', help='Certify N_24 as a 2-fold branched quotient')
    quotient.add_argument('--json', action='store_true', help='Print JSON')

    sub = add('catalog', 'Named complexes', json_flag=False)
    catalog = sub.add_subparsers(dest='catalog_command', required=True)
    listing = catalog.add_parser('list', help='List catalog entries')
    listing.add_argument('--json', action='store_true', help='Print JSON')
    get = catalog.add_parser('get', help='Print or write one entry')
    get.add_argument('name')
    get.add_argument('-o', '--output')
    verify = catalog.add_parser('verify', help='Run the integrity suite')
    verify.add_argument('names', nargs='*')
    verify.add_argument('--json', action='store_true', help='Print JSON')

    sub = add('classify', 'Run the 8-vertex census')
    sub.add_argument('--vertices', type=int, default=8)
    sub.add_argument('--exhaustive', action='store_true', help='Cross-check with the flat search')
    sub.add_argument('--no-symmetry', action='store_true', help='Disable link automorphism reduction')
    sub.add_argument('--jobs', type=int, default=1)
    sub.add_argument('-o', '--output-dir', default='.')

    sub = add('enumerate-surfaces', 'Enumerate weak 2-pseudomanifolds')
    sub.add_argument('--vertices', type=int, default=7)
    return parser


HANDLERS = {
    'verify': cmd_verify,
    'links': cmd_links,
    'moves': cmd_moves,
    'apply': cmd_apply,
    'script': cmd_script,
    'iso': cmd_iso,
    'homology': cmd_homology,
    'cover': cmd_cover,
    'catalog': cmd_catalog,
    'classify': cmd_classify,
    'enumerate-surfaces': cmd_enumerate_surfaces,
}


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_OK
    setup_logging(args.verbose, args.debug)
    if 'json' not in args:
        args.json = False
    try:
        return HANDLERS[args.command](args)
    except FacetParseError as e:
        ui.show_error(str(e))
        return EXIT_USAGE
    except OSError as e:
        ui.show_error(f"Cannot read input: {e}")
        return EXIT_USAGE
    except ClassificationError as e:
        ui.show_error(str(e))
        for line in e.details():
            ui.emit(line)
        return EXIT_INTEGRITY
    except CatalogError as e:
        ui.show_error(str(e))
        return EXIT_INTEGRITY
    except MoveError as e:
        ui.show_error(str(e))
        return EXIT_NEGATIVE
    except (CoveringError, NeighbourlyError, ComplexError) as e:
        ui.show_error(str(e))
        return EXIT_NEGATIVE
    except ValueError as e:
        ui.show_error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

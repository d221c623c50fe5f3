"""
Octaflip Terminal Output

Rich-based rendering for the command-line tool. Machine-readable output
(facet lists, JSON, DOT) bypasses rich and goes to stdout verbatim.
"""

import sys
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

try:
    from rich import box
    from rich.console import Console
    from rich.markup import escape
    from rich.table import Table
except ImportError:
    print("Error: 'rich' library is required. Install with: pip install rich")
    sys.exit(1)


console = Console(highlight=False)


def emit(text: str) -> None:
    """Write text to stdout unchanged (no wrapping or markup)."""
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def show_success(message: str):
    """Display success message."""
    console.print(f"[bold green]✓[/] {escape(message)}")


def show_error(message: str):
    """Display error message."""
    console.print(f"[bold red]✗[/] {escape(message)}")


def show_warning(message: str):
    """Display warning message."""
    console.print(f"[bold yellow]![/] {escape(message)}")


def show_info(message: str):
    """Display info message."""
    console.print(f"[bold cyan]ℹ[/] {escape(message)}")


def _mark(value: Optional[bool]) -> str:
    if value is None:
        return "[dim]unknown[/]"
    return "[green]yes[/]" if value else "[red]no[/]"


def show_recognition(report: Dict) -> None:
    """Table of the recognition hierarchy for one complex."""
    table = Table(title=f"Recognition (dim {report['dim']}, {report['n_vertices']} vertices)", box=box.ROUNDED)
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    for key, label in (
        ("is_pure", "pure"),
        ("is_weak_pm", "weak pseudomanifold"),
        ("is_strongly_connected", "strongly connected"),
        ("is_pseudomanifold", "pseudomanifold"),
        ("is_normal", "normal"),
        ("is_combinatorial_manifold", "combinatorial manifold"),
    ):
        table.add_row(label, _mark(report[key]))
    console.print(table)
    for item in report["singular_vertices"]:
        console.print(f"  singular vertex {item['vertex']}: {escape(item['kind'])} on {item['vertex_count']} vertices")


def show_links(rows: Sequence[Tuple[int, str, str, Optional[str]]]) -> None:
    table = Table(title="Vertex links", box=box.ROUNDED)
    table.add_column("Vertex", style="dim")
    table.add_column("Type", style="magenta")
    table.add_column("Degrees", style="white")
    table.add_column("Catalog", style="green")
    for v, kind, degrees, name in rows:
        table.add_row(str(v), escape(kind), degrees, name or "-")
    console.print(table)


def show_homology(lines: Iterable[str]) -> None:
    for line in lines:
        console.print(f"  {escape(line)}")


def show_catalog_list(rows: Sequence[Tuple[str, str, str]]) -> None:
    table = Table(title="Catalog", box=box.ROUNDED)
    table.add_column("#", style="dim", width=3)
    table.add_column("Name", style="magenta")
    table.add_column("Source", style="cyan")
    table.add_column("Notes", style="white")
    for i, (name, source, notes) in enumerate(rows, 1):
        table.add_row(str(i), name, escape(source), escape(notes) or "-")
    console.print(table)


def show_verification(results: Sequence) -> None:
    table = Table(title="Catalog integrity", box=box.ROUNDED)
    table.add_column("Name", style="magenta")
    table.add_column("Checks", style="dim")
    table.add_column("Status")
    for result in results:
        status = "[green]ok[/]" if result.passed else f"[red]{escape('; '.join(result.failures))}[/]"
        table.add_row(result.name, str(len(result.checked)), status)
    console.print(table)


def show_surfaces(rows: Sequence[Tuple[int, str, str, Optional[str]]]) -> None:
    table = Table(title="Weak 2-pseudomanifolds", box=box.ROUNDED)
    table.add_column("#", style="dim", width=3)
    table.add_column("Degree sequence", style="cyan")
    table.add_column("Type", style="magenta")
    table.add_column("Catalog", style="green")
    for index, degrees, kind, name in rows:
        table.add_row(str(index), degrees, escape(kind), name or "-")
    console.print(table)


def show_census(counts: Dict[str, int], layers: Dict[str, List[int]]) -> None:
    table = Table(title="8-vertex census", box=box.ROUNDED)
    table.add_column("Series", style="magenta")
    table.add_column("Classes", style="white")
    table.add_column("Layer sizes", style="cyan")
    table.add_row("neighbourly", str(counts["neighbourly"]), "-")
    table.add_row("spheres", str(counts["spheres"]), "/".join(str(n) for n in layers["spheres"]))
    table.add_row("normal, not manifold", str(counts["normals"]), "/".join(str(n) for n in layers["normals"]))
    console.print(table)

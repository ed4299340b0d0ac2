from toda_cells.models import GraphReport


def _quote(label: str) -> str:
    return '"' + label.replace('"', '\\"') + '"'


def graph_to_dot(report: GraphReport) -> str:
    """Graphviz digraph; vertices are star/zero strings, edges carry their weight."""
    name = f"{report.kind}_{report.family}{report.rank}"
    lines = [f"digraph {name} {{", "  rankdir=TB;"]
    for vertex in report.vertices:
        lines.append(f"  {_quote(vertex)};")
    for edge in report.edges:
        attrs = ""
        if edge.weight is not None:
            attrs = f' [label="{edge.weight}", weight={edge.weight}]'
        lines.append(f"  {_quote(edge.source)} -> {_quote(edge.target)}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"

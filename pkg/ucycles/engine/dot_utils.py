from typing import List

from .models import TransitionDigraph


class DotUtils:
    @staticmethod
    def quote(text: str) -> str:
        """Quote an identifier for the DOT language."""
        return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'

    @staticmethod
    def graph_name(graph: TransitionDigraph) -> str:
        word_class = graph.word_class
        parts = [word_class.name, f"n{word_class.n}", f"k{word_class.k}"]
        for key, value in word_class.params:
            if isinstance(value, tuple):
                value = "-".join(str(v) for v in value)
            parts.append(f"{key}{value}")
        return "_".join(parts)

    @staticmethod
    def to_dot(graph: TransitionDigraph) -> str:
        """Render the digraph; vertices and edges come out in lexicographic order.

        Vertex names are the display strings of the windows, edge labels the
        class members.
        """
        fmt = graph.word_class.alphabet.format
        quote = DotUtils.quote
        names = [fmt(graph.vertex_word(i)) for i in range(graph.vertex_count)]

        lines: List[str] = [f"digraph {quote(DotUtils.graph_name(graph))} {{"]
        for name in names:
            lines.append(f"  {quote(name)};")
        for edge in range(graph.edge_count):
            tail = names[int(graph.tails[edge])]
            head = names[int(graph.heads[edge])]
            label = fmt(graph.edge_word(edge))
            lines.append(f"  {quote(tail)} -> {quote(head)} [label={quote(label)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

"""Run the worked examples through the library and print what comes out."""

from modsym.detection import build_graph, detect_layered_symmetries, detect_symmetries
from modsym.formula import parse_cnf, read_cnf
from modsym.models import ClassSpec, is_closed_under
from modsym.permutation import is_layered_symmetry, is_symmetry, parse_cycles, parse_sequence

TWIN = "(a | [m](b | ~[m]c)) & (b | [m](a | ~[m]c))"
SWAP = "{ { ~p, r }, { q, r }, { r, [m]{ ~p, q } } }"
LAYERED = "(p | [m](p | ~r)) & (~q | [m](~p | r))"


def main() -> None:
    print("normalize <m>(p & q & p) & [m]~r ->", read_cnf("<m>(p & q & p) & [m]~r"))

    print("\nswap-with-flip on", SWAP, "->", is_symmetry(parse_cycles("(p ~q)(~p q)"), parse_cnf(SWAP)))

    phi = read_cnf(TWIN)
    graph, _ = build_graph(phi)
    print(f"\ncolored graph of {TWIN}: {graph.n} nodes, {graph.color_count()} colors, "
          f"{len(graph.e1)} + {len(graph.e2)} edges")
    print(detect_symmetries(phi).to_text())

    phi = read_cnf(LAYERED)
    print(f"\n{LAYERED} normalizes to {phi}")
    print("plain detection:")
    print(detect_symmetries(phi).to_text())
    print("layered detection:")
    print(detect_layered_symmetries(phi).to_text())
    seq = "[ (p ~q)(~p q) ; (p ~r)(~p r) ]"
    print(f"{seq} layered symmetry? {is_layered_symmetry(parse_sequence(seq), phi)}")

    print("\nnominal classes:")
    for cyc, noms in (("(i p)(~i ~p)", {"i"}), ("(i j)(~i ~j)", {"i", "j"})):
        print(f"  {cyc} with nominals {sorted(noms)} closed: "
              f"{is_closed_under(parse_cycles(cyc), ClassSpec(nominals=noms))}")


if __name__ == "__main__":
    main()

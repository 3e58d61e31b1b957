"""Print the closure example round by round and the non-inner-generated set
on [3]^2 together with its dual-extendability check."""

from fractions import Fraction

from prodexp.code import rep_code
from prodexp.experiments import closure_example, non_ig_example
from prodexp.field import make_field
from prodexp.grid import closure_rounds, eps_closure
from prodexp.product import CodeTuple, inner_generation_dims, is_extendable


def draw(n, layers):
    """layers: list of (symbol, CellSet); later layers win. Row y = n-1 on top."""
    rows = []
    for y in reversed(range(n)):
        row = []
        for x in range(n):
            ch = "."
            for sym, S in layers:
                if (x, y) in S:
                    ch = sym
            row.append(ch)
        rows.append(" ".join(row))
    return "\n".join(rows)


def main():
    M = closure_example()
    eps = Fraction(1, 2)
    rounds = closure_rounds(M, eps, inclusive=False)
    print(f"closure on [6]^2 at eps = {eps}: |M| = {len(M)}")
    layers = [("#", M)] + [(str(k), r) for k, r in enumerate(rounds, 1)]
    print(draw(6, layers))
    print(f"closure size: {len(eps_closure(M, eps, inclusive=False))} (strict rule), "
          f"{len(eps_closure(M, eps))} (absorbing lines with exactly eps*n cells)")
    print()

    F = make_field(1)
    tup = CodeTuple((rep_code(3, F), rep_code(3, F)))
    N = non_ig_example()
    gen, res = inner_generation_dims(tup, N)
    print("non-inner-generated set for (Rep_3, Rep_3):")
    print(draw(3, [("#", N)]))
    print(f"line codewords inside M span {gen} dims; sum-code words on M span {res}")
    print(f"extendable in the dual product: {is_extendable(tup.dual(), N)}")


if __name__ == "__main__":
    main()

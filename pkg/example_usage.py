#!/usr/bin/env python3
"""
Example usage of MeadowCalc.
Demonstrates the library API and the script session on a few small models.
"""

from fractions import Fraction

from meadowcalc.cache import get_cache_stats
from meadowcalc.condval import cv_canon, e_p, var_p
from meadowcalc.configspace import ask_threshold, elicit_indifference
from meadowcalc.events import make_space
from meadowcalc.multidim import dimension_spaces, format_tensor, joint_exists, pff_from_blocks
from meadowcalc.parser import parse_cv
from meadowcalc.probability import check_axioms, cond_p, pf_eval, separating_model, weight_pf
from meadowcalc.report import format_system_verdict
from meadowcalc.session import run_text

F = Fraction

SCRIPT = """\
space S atoms a b
pf P on S : a=1/3 b=2/3
cv X on S = a :-> v(6)
eval E[P, X]
check PF,WPF P
"""


def main():
    """Walk through the main parts of the calculus."""

    print("🧮 MeadowCalc - Example Usage")
    print("=" * 50)

    # Example 1: probability functions
    print("\n📊 Example 1: Probability Functions")
    print("-" * 30)
    space = make_space(["a", "b", "c"])
    p = weight_pf(space, {"a": F(1, 2), "b": F(1, 4), "c": F(1, 4)})
    a, b = space.atom("a"), space.atom("b")
    print(f"P(a | b) = {pf_eval(p, a | b)}")
    print(f"PS(a, F) = {cond_p('ps', p, a, space.bot())}")
    for verdict in check_axioms(p, ["PF", "WPF", "BR"]):
        print(f"  {format_system_verdict(verdict)}")

    print("\nThe separating model satisfies WPF but not PF:")
    for verdict in check_axioms(separating_model(), ["PF", "WPF"]):
        print(f"  {format_system_verdict(verdict)}")

    # Example 2: conditional values
    print("\n🔀 Example 2: Conditional Values")
    print("-" * 30)
    x = cv_canon(parse_cv("(a|c) :-> v(3) + b :-> v(1/2)"), space)
    print(f"X = {x}")
    print(f"E[X] = {e_p(x, p)}, VAR[X] = {var_p(x, p)}")

    # Example 3: decisions
    print("\n🎯 Example 3: Decisions")
    print("-" * 30)
    print(f"Indifference probability: {elicit_indifference(10, 0, 5, 10)}")
    print(f"Asking pays off below P(e) = {ask_threshold(10, 0, 2)}")

    # Example 4: multidimensional probability
    print("\n🧊 Example 4: Joint Existence")
    print("-" * 30)
    spaces = dimension_spaces(["a", "b"])
    q = pff_from_blocks(spaces, {("a", "b"): {(0, 0): F(1, 2), (1, 1): F(1, 2)}})
    result = joint_exists(q)
    print(f"Joint: {format_tensor(q, ('a', 'b'), result.witness) if result.exists else result.certificate}")

    # Example 5: script session
    print("\n📜 Example 5: Script Session")
    print("-" * 30)
    print(run_text(SCRIPT))

    # Example 6: cache information
    print("\n💾 Example 6: Cache Statistics")
    print("-" * 30)
    stats = get_cache_stats()
    print(f"Cache enabled: {stats.get('enabled')}")
    print(f"Cache entries: {stats.get('total_entries', 0)}")

    print("\n✨ Example completed successfully!")


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n\n👋 Example interrupted by user")
    except Exception as e:
        print(f"\n❌ Error running example: {e}")
        print("\n💡 Make sure all dependencies are installed:")
        print("   pip install -r requirements.txt")

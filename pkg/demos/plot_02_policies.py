"""
Policies over a multi-valued universe
=====================================

Attributes take exactly one value each. A policy is an AND/OR tree whose
leaves accept one or more values of a single attribute, and an attribute
may appear at most once per policy.
"""

from hpabe import AttributeList, Universe, normalize, parse_policy, print_policy, satisfies
from hpabe.policy import PolicyError

universe = Universe.parse(
    """
    # a small department
    dept: cs, ee, me
    level: phd, ms, bs
    site: north, south
    """
)
print(universe.to_text())

policy = parse_policy("dept in {cs, ee} AND (level=phd OR site=north)", universe)
print("parsed  :", print_policy(policy))

# attributes the policy leaves out become wildcard leaves under the root
print("normal  :", print_policy(normalize(policy)))

for text in ["dept=cs,level=ms,site=north", "dept=me,level=phd,site=north", "dept=ee,level=bs,site=south"]:
    L = AttributeList.parse(universe, text)
    print(f"{text:32s} -> {satisfies(L, policy)}")

for bad in ["dept=cs AND dept=ee", "dept=cs AND", "colour=red", "NOT dept=cs"]:
    try:
        parse_policy(bad, universe)
    except PolicyError as exc:
        print(f"rejected {bad!r}: {exc}")

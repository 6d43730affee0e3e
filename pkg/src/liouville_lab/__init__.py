"""liouville-lab: exact desk-scale number theory around the Liouville function
at polynomial arguments.

Layers: exact integer arithmetic (`arith`), integer polynomials
(`polynomial`), segmented value sieves (`sieve`), root-of-unity valued
multiplicative functions (`multfn`), the three-variable functional equation
over Z_q (`funceq`), continued-fraction Pell machinery (`pell`), the
reducible-cubic identity toolkit (`cubic`), correlation and uniformity
statistics (`correlation`), and brute-force witness searches (`search`),
wired together by a CLI (`cli`).
"""

__version__ = "0.1.0"

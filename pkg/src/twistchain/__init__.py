"""Exact computer algebra for peripheric chains of twists on U(sl(N)).

Modules:
    exactring   rationals and truncated jets
    liealg      sl(N), the carriers L(alpha, beta), cohomology
    tensorexpr  tensor expressions and their exact evaluation
    twistlib    twist factors, chains and JSON chain specs
    hopfverify  Drinfeld, counit, Yang-Baxter and coproduct checks
    classical   r-matrices, CYBE, carriers, omega-forms
    cli         the ``twistchain`` command
"""

__version__ = "0.1.0"

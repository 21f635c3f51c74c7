"""Exact computations with tropical Pluecker vectors and Dressian fans.

The package is organized around the pipeline

    point configurations -> tropical Pluecker vectors -> matroid
    subdivisions of hypersimplices -> tight-spans -> rays and maximal
    cones of the Dressian Dr(k,n),

with every step carried out in exact rational arithmetic.  Submodules:

- combinat:          k-subsets, octahedral 3-faces, Sym(n) action
- exactlin:          rational linear algebra, LP, double description, hulls
- tropical_core:     tropical determinants, tau/Phi, the 3-term check
- matroid:           matroids from basis sets, polytope dimensions
- subdivision:       subdivisions, tight-spans, the cone construction
- tropical_polytope: type decompositions, rigidity, secondary fans
- fan:               split sequences and the Dressian enumerator
- store:             persistence of computed fans
- cli:               command-line interface
"""

__version__ = "0.1.0"

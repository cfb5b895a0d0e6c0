# app/operations/__init__.py
"""
Algorithms over permutation groups.

- group_core: closures, Sylow subgroups, normal subgroups, products, isomorphism
- zlinalg: Smith normal form and linear algebra over Z/n
- constructors: the named group families and their verification reports
- frobenius: Frobenius kernels and complements
- gz_classify: Z-group and GZ-group recognition
- cohomology: H²(G, Z/n) and the Schur multiplier
- bogomolov: the Bogomolov multiplier
- rationality: the retract-rationality rule engine
- verification: the suites behind the ``verify`` command
"""

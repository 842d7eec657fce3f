"""Application package for the PAFAS workbench.

Term algebras live in `core`, their concrete syntax in `syntax`, the
operational semantics in `semantics`, translations and rewriting in
`transform` and state-space analyses in `analysis`. `api` and `cli` are the
two front-ends; both go through `services.workbench`.
"""

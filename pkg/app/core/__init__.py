"""Term representation, relabellings, syntactic predicates and the error hierarchy."""

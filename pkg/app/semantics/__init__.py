"""Action, read and time transitions of both algebras."""

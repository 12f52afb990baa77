"""Cyclotomic Hecke-Clifford and Sergeev superalgebras: modules, idempotents, seminormal bases."""

"""Shared hypothesis strategies and small helpers for the test suite."""

from __future__ import annotations

import hypothesis.strategies as st

from pdlfix.syntax import (
    And,
    Atom,
    AtomicProg,
    Bot,
    Box,
    Choice,
    Diamond,
    NegAtom,
    Or,
    Seq,
    Star,
    Test,
    Top,
    Var,
)

atom_names = st.sampled_from(["p", "q", "r", "s"])
prog_names = st.sampled_from(["a", "b", "c"])
var_names = st.sampled_from(["X", "Y"])

formulas = st.deferred(
    lambda: st.one_of(
        st.builds(Atom, atom_names),
        st.builds(NegAtom, atom_names),
        st.builds(Var, var_names),
        st.just(Top()),
        st.just(Bot()),
        st.builds(Or, formulas, formulas),
        st.builds(And, formulas, formulas),
        st.builds(Box, programs, formulas),
        st.builds(Diamond, programs, formulas),
    )
)

programs = st.deferred(
    lambda: st.one_of(
        st.builds(AtomicProg, prog_names),
        st.builds(Test, formulas),
        st.builds(Seq, programs, programs),
        st.builds(Choice, programs, programs),
        st.builds(Star, programs),
    )
)

variable_free_formulas = st.deferred(
    lambda: st.one_of(
        st.builds(Atom, atom_names),
        st.builds(NegAtom, atom_names),
        st.just(Top()),
        st.just(Bot()),
        st.builds(Or, variable_free_formulas, variable_free_formulas),
        st.builds(And, variable_free_formulas, variable_free_formulas),
        st.builds(Box, variable_free_programs, variable_free_formulas),
        st.builds(Diamond, variable_free_programs, variable_free_formulas),
    )
)

variable_free_programs = st.deferred(
    lambda: st.one_of(
        st.builds(AtomicProg, prog_names),
        st.builds(Test, variable_free_formulas),
        st.builds(Seq, variable_free_programs, variable_free_programs),
        st.builds(Choice, variable_free_programs, variable_free_programs),
        st.builds(Star, variable_free_programs),
    )
)

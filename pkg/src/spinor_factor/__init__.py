"""Factorisation of exceptional Lie group elements into one-parameter spinor generators."""

"""Exact structure tensors of local loops given as sections of Lie-group coset spaces."""

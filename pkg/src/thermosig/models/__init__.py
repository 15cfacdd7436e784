"""Load and supply equations"""

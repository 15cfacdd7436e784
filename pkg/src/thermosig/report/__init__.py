"""Signature, evaluation and report output"""

"""Synthetic station datasets"""

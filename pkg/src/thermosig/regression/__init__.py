"""Coefficient identification"""

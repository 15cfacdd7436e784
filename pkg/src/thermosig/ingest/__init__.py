"""Sensor dataset ingestion"""

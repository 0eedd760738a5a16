"""Dummy init file for Python scripts at vdspec/test"""

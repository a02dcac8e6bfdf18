"""Tests for utils package"""

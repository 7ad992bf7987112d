"""Continuous tetration with a q-analog seed segment."""

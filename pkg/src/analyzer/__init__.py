# Analyzer module

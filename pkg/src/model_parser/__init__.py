# Model parser module

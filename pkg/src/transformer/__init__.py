# Transformer module

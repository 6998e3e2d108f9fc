# Diagram model module

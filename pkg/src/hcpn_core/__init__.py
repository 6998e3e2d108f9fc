# HCPN core module

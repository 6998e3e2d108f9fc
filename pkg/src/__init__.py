# IodNet - Main package

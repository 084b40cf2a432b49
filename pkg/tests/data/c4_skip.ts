# The top transfer alone.  As raw arrows this fails intersection closure:
# restricting e -> C4 to C2 needs e -> C2.
group: C4
e -> C4

# Order-4 cyclic group with every transfer switched on except C2 -> C4.
group: C4
e -> C2
e -> C4

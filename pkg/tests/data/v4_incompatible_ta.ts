# Additive half: one more transfer than the multiplicative side, yet the
# pair still fails the compatibility triple at (C2xC2, C2#1, C2#2).
group: C2xC2
e -> C2#1
e -> C2#2
e -> C2#3
C2#1 -> C2xC2

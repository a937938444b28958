"""Integer opcodes shared by the compiled-circuit kernels.

Kept in a dependency-free module so both kernel backends and the circuit
compiler agree on the encoding.
"""

OP_H = 0
OP_X = 1
OP_Z = 2
OP_RY = 3
OP_RZ = 4
OP_PHASE = 5

# Every request is granted on the next step.
initial: s0
trans:
  s0 r any -> s1
  s1 g nonzero -> s0

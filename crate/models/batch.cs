# Two requests, then two grants.
initial: s0
trans:
  s0 r any -> s1
  s1 r any -> s2
  s2 g nonzero -> s3
  s3 g nonzero -> s0

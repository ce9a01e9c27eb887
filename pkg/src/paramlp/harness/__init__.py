"""Instance generators, JSON I/O, the grid oracle and the benchmark runner."""

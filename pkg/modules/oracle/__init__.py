from modules.oracle.lca import LcaStructure, euler_tour, sparse_table
from modules.oracle.oracle import BenchStats, DistanceOracle, bench_oracle, build_oracle, query_pairs

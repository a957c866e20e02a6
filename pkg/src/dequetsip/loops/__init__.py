"""Corner-weighted quarter-plane loops."""
from .table import (LoopTable, PositivityReport, QSeries, brute_force_loops, build_loop_table,
                    catalan, check_a_plus_one_positivity, q1_series, q_at, q_series, u_series)

__all__ = ["LoopTable", "PositivityReport", "QSeries", "brute_force_loops", "build_loop_table",
           "catalan", "check_a_plus_one_positivity", "q1_series", "q_at", "q_series", "u_series"]

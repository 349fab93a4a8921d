"""
Searching the two-circle family
===============================

45 rollers (tilt, offset, radius ratio) are triaged with the approximate
oracle; the best five, the oloid and the cylinder are then re-scored with
the rigid-body oracle.
"""
from rollscore.io import write_json
from rollscore.search import SearchGrid, format_table, run_search, summarize_search

results = run_search(SearchGrid(), top_k=5)
print(format_table(results))
print(summarize_search(results))

write_json("search.json", {"results": [r.to_dict() for r in results]})

#!/usr/bin/env python3
"""Quick smoke test for the skewlab API."""

import sys
import os

# Add current directory to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# Scratch run ledger for the smoke test
os.environ['SKEWLAB_DATABASE_URL'] = 'sqlite:///./test_skewlab_runs.db'
os.environ['SKEWLAB_DEBUG'] = 'False'

from fastapi.testclient import TestClient
from skewlab.main import app
from skewlab.database import init_db

TRUNCPOLY_TOWER = """
[base]
family = truncpoly
prime = 2
length = 4

[layer]
var = y
precision = 3
tau = map x + x^2
delta = tau-minus-id
"""

PLANE_TOWER = """
[base]
family = quantum-plane
prime = 5
q = 2
precision = 4
"""

print("🚀 Starting skewlab Quick Test\n")

# Initialize database
print("1. Initializing run ledger...")
init_db()
print("✅ Run ledger initialized\n")

# Create test client
client = TestClient(app)

# Test 1: Health check
print("2. Testing health check endpoint...")
response = client.get("/health")
assert response.status_code == 200
print(f"✅ Health check: {response.json()}\n")

# Test 2: Commutation rule in a skew series ring
print("3. Evaluating y*x over F2[x]/(x^4) with tau(x) = x + x^2...")
response = client.post("/api/eval/", json={"config": TRUNCPOLY_TOWER, "expression": "y*x"})
assert response.status_code == 200
print(f"✅ y*x = {response.json()['result']}\n")

# Test 3: Neumann inverse
print("4. Evaluating inv(1+y)...")
response = client.post("/api/eval/", json={"config": TRUNCPOLY_TOWER, "expression": "inv(1+y)"})
assert response.status_code == 200
print(f"✅ inv(1+y) = {response.json()['result']}\n")

# Test 4: Quantum plane
print("5. Evaluating y*x in the completed quantum plane...")
response = client.post("/api/eval/", json={"config": PLANE_TOWER, "expression": "y*x"})
assert response.status_code == 200
print(f"✅ y*x = {response.json()['result']}\n")

# Test 5: List suites
print("6. Listing verification suites...")
response = client.get("/api/suites")
assert response.status_code == 200
names = response.json()
print(f"✅ Found {len(names)} suites\n")

# Test 6: Run and store suites
print("7. Running suites on the truncpoly tower...")
totals = {"passed": 0, "failed": 0, "skipped": 0}
for name in ["jt-lemma", "z-conjugation", "neumann"]:
    response = client.post("/api/suites/run", json={"config": TRUNCPOLY_TOWER, "suite": name, "store": True})
    assert response.status_code == 200
    for record in response.json()["records"]:
        key = {"pass": "passed", "fail": "failed", "skipped": "skipped"}[record["status"]]
        totals[key] += 1
    print(f"   {name}: done")
assert totals["failed"] == 0
print(f"✅ {totals['passed']} cases passed, {totals['skipped']} skipped\n")

# Test 7: Stored runs
print("8. Reading the run ledger...")
response = client.get("/api/runs")
assert response.status_code == 200
runs = response.json()
response = client.get(f"/api/runs/{runs[0]['id']}")
assert response.status_code == 200
print(f"✅ Latest stored run: {runs[0]['suite']} with {len(response.json()['cases'])} cases\n")

print("=" * 60)
print("🎉 ALL TESTS PASSED!")
print("=" * 60)
print("\nTo run the full application:")
print("  1. Install dependencies: pip install -r requirements.txt")
print("  2. Run the test suite: pytest")
print("  3. Start server: python -m uvicorn skewlab.main:app --reload")
print("  4. Or run suites in batch: python -m skewlab --config tower.cfg --report jsonl")

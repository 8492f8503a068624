def test_home_lists_endpoints(client):
    response = client.get('/')
    assert response.status_code == 200
    assert response.get_json()['endpoints']['hecke_cosets'] == '/api/hecke/cosets'


def test_health(client):
    body = client.get('/health').get_json()
    assert body['status'] == 'online'
    assert body['precision'] == 30


def test_unknown_route(client):
    response = client.get('/nope')
    assert response.status_code == 404
    assert response.get_json()['isError']


def test_cosets(client):
    response = client.get('/api/hecke/cosets', query_string={'p': 3, 'D': 3})
    assert response.status_code == 200
    assert response.get_json()['data']['count'] == 10

    response = client.get('/api/hecke/cosets', query_string={'p': 5, 'D': 3})
    assert response.status_code == 400
    body = response.get_json()
    assert body['error'] == 'NotRamifiedError'
    assert body['success'] is False


def test_ledger(client):
    entries = [
        {'curve': 'C1', 'cusp': 'c1', 'mult': 1, 'global': 'A'},
        {'curve': 'C1', 'cusp': 'c2', 'mult': -1, 'global': 'B'},
        {'curve': 'C2', 'cusp': 'c3', 'mult': 1},
        {'curve': 'C2', 'cusp': 'c4', 'mult': -1},
    ]
    table = [{'curve': 'C2', 'cusp': 'c3', 'global': 'A'}, {'curve': 'C2', 'cusp': 'c4', 'global': 'B'}]
    response = client.post('/api/boundary/ledger', json={'entries': entries, 'pushforward': table})
    assert response.status_code == 200
    data = response.get_json()['data']
    assert data['ok_2a'] and not data['ok_2b']
    assert data['pushforward'] == {'A': 2, 'B': -2}

    response = client.post('/api/boundary/ledger', json={'entries': entries})
    assert response.status_code == 200
    data = response.get_json()['data']
    assert data['unmapped'] == [{'curve': 'C2', 'cusp': 'c3'}, {'curve': 'C2', 'cusp': 'c4'}]
    assert not data['ok_2b']


def test_torsion(client):
    response = client.get('/api/boundary/torsion', query_string={'u': '1/2,0', 'lattice': '1,0;0,1'})
    assert response.status_code == 200
    assert response.get_json()['data']['torsion_order'] == 2

    response = client.get('/api/boundary/torsion', query_string={'u': '1/2,0', 'lattice': '2,0'})
    assert response.status_code == 400
    assert response.get_json()['error'] == 'RankError'


def test_lfactor(client):
    response = client.get('/api/lfactor', query_string={'place': 'ramified', 'order': 6})
    assert response.status_code == 200
    assert response.get_json()['data']['series_check']['equal']

    assert client.get('/api/lfactor', query_string={'place': 'archimedean'}).status_code == 422
    response = client.get('/api/lfactor', query_string={'place': 'inert', 'satake': 'a1=2'})
    assert response.status_code == 400


def test_verify(client):
    response = client.get('/api/verify/ramified', query_string={'order': 6})
    assert response.status_code == 200
    body = response.get_json()
    assert body['passed']
    assert body['data']['config']['order_ramified'] == 6

    response = client.get('/api/verify/ramified', query_string={'order': 6, 'format': 'csv'})
    assert response.get_json()['data'].startswith('suite,test,')

    response = client.get('/api/verify/nosuch')
    assert response.status_code == 400
    assert response.get_json()['error'] == 'UsageError'


def test_assemble(client):
    response = client.get('/api/assemble', query_string={'D': 3, 'lprime': '1', 'check': 'true'})
    assert response.status_code == 200
    data = response.get_json()['data']
    assert data['completed'] is False
    assert 'limit_check' in data

    assert client.get('/api/assemble', query_string={'D': 5, 'lprime': '1'}).status_code == 400

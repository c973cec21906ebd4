package test.cbo;

public class ClassA {
    public void go(SuperC s) {
        s.init();
    }
}

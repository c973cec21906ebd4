package test.cbo;

public class SuperC {
    protected int counter;

    public void init() {
        counter = 0;
    }

    public void register(ClassA a) {
        counter++;
    }
}
